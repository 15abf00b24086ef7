/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "leximax/sequential.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "leximax/errors.hpp"
#include "leximax/milp.hpp"

namespace leximax {

namespace {

using Clock = std::chrono::steady_clock;

/// Grid value when x is within round-off of it, x otherwise.
double clean(double x, double tol)
{
  const double snap = snap_to_grid(x, tol);
  return std::abs(snap - x) <= 1e-9 * std::max(1.0, std::abs(x)) ? snap : x;
}

struct StageResult {
  std::vector<double> u;  // model units
  double z = 0.0;
  double seconds = 0.0;
  long nodes = 0;
  bool tieBreakProven = true;
};

class Driver {
 public:
  Driver(const AllocationInstance& instance, TradeoffParams params, const RunOptions& options)
      : inst_(instance), params_(std::move(params)), opt_(options)
  {
    backend_ = opt_.backend ? opt_.backend : embedded_backend();
  }

  StageResult run_stage(LinearModel model, const SequentialState& state)
  {
    const auto start = Clock::now();
    model = attach_feasible_set(model, inst_.feasible);
    if (opt_.tightenBigM) { model = tighten_big_m(model, state, params_); }
    if (opt_.cuts && state.k >= 2) { model = add_valid_cuts(model, state, inst_.groups, params_); }
    const int zVar = model.roles().z;
    if (params_.tieBreak.mode == TieBreak::Mode::Epsilon) {
      model = add_tiebreak(model, 0.0, inst_.groups, params_);
    }
    // In the stage-k models the indicator binaries follow from the
    // allocation, so the allocation's own binaries are branched on first.
    SolverConfig cfg = opt_.solver;
    cfg.branchExtraFirst = state.k >= 2;
    Solution sol = checked(backend_(model, cfg), state.k, "");
    StageResult out;
    out.z = sol.values[static_cast<std::size_t>(zVar)];
    out.nodes = sol.stats.nodes;
    if (params_.tieBreak.mode == TieBreak::Mode::Hierarchical) {
      const LinearModel broken = add_tiebreak(model, sol.objective, inst_.groups, params_);
      cfg.start = sol.values;
      if (opt_.tieBreakNodeLimit > 0) { cfg.nodeLimit = opt_.tieBreakNodeLimit; }
      Solution tb = backend_(broken, cfg);
      out.nodes += tb.stats.nodes;
      const bool limited = tb.status == SolveStatus::GapLimit || tb.status == SolveStatus::TimeLimit;
      if (limited && !tb.values.empty()) {
        out.tieBreakProven = false;
        sol = std::move(tb);
      } else {
        sol = checked(std::move(tb), state.k, " (tie-break)");
      }
    }
    for (int id : model.roles().u) { out.u.push_back(sol.values[static_cast<std::size_t>(id)]); }
    out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return out;
  }

  /// Smallest utility among `candidates`, compared on the feasTol grid so
  /// solver noise cannot reorder ties; lowest index wins a tie.
  std::pair<int, double> argmin(const std::vector<double>& u, const std::vector<int>& candidates) const
  {
    int best = -1;
    double bestSnap = 0.0;
    for (int i : candidates) {
      const double snap = snap_to_grid(u[static_cast<std::size_t>(i)], params_.feasTol);
      if (best < 0 || snap < bestSnap) {
        best = i;
        bestSnap = snap;
      }
    }
    // Pin grid values exactly; values that are genuinely off the grid (real
    // data such as 3.14159265) keep the solver's value so the pin stays feasible.
    return {best, clean(u[static_cast<std::size_t>(best)], params_.feasTol)};
  }

 private:
  Solution checked(Solution sol, int k, const char* what) const
  {
    if (sol.status == SolveStatus::Optimal) { return sol; }
    const std::string ctx = "stage P" + std::to_string(k) + what + ": " + to_string(sol.status) +
                            (sol.detail.empty() ? "" : " (" + sol.detail + ")");
    if (sol.status == SolveStatus::Infeasible && k == 1) {
      throw InfeasibleError("instance is infeasible (" + ctx + ")");
    }
    throw SolverError(ctx);
  }

  const AllocationInstance& inst_;
  TradeoffParams params_;
  const RunOptions& opt_;
  Backend backend_;
};

}  // namespace

SocialOutcome run_sequence(const AllocationInstance& instance, const TradeoffParams& params,
                           const RunOptions& options)
{
  instance.validate();
  TradeoffParams p = params;
  if (!p.bigM) { p.bigM = compute_big_m(instance, p); }
  p.validate();

  const auto start = Clock::now();
  const int n = instance.parties();
  Driver driver(instance, p, options);
  SocialOutcome out;
  out.offset = instance.offset;

  SequentialState state = SequentialState::initial(n);
  StageResult stage = driver.run_stage(encode_P1(n, instance.groups, p), state);
  auto [i1, u1] = driver.argmin(stage.u, state.active);
  const auto record = [&](int k, int idx, double val, const StageResult& r) {
    IterationLog entry{k, idx, instance.to_original(val), r.z, r.seconds, r.nodes, r.tieBreakProven, {}};
    for (double v : r.u) { entry.utilities.push_back(clean(instance.to_original(v), p.feasTol)); }
    out.log.push_back(std::move(entry));
  };
  record(1, i1, u1, stage);
  state.fix(i1, u1);

  std::vector<double> previous = stage.u;
  std::vector<double> final = stage.u;
  int K = 1;
  for (int k = 2; k <= n; ++k) {
    stage = driver.run_stage(encode_Pk(state, instance.groups, p), state);
    auto [ik, uk] = driver.argmin(stage.u, state.active);
    uk = std::max(uk, state.last());
    record(k, ik, uk, stage);
    if (uk - state.anchor() > p.delta + 0.5 * p.feasTol) {
      final = options.assembly == FinalAssembly::TerminalSolve ? stage.u : previous;
      break;
    }
    state.fix(ik, uk);
    K = k;
    previous = stage.u;
    final = stage.u;
  }

  out.K = K;
  const double anchor = instance.to_original(state.anchor());
  for (int j = 0; j < K; ++j) {
    out.fixedIdx.push_back(state.fixedIdx[static_cast<std::size_t>(j)]);
    out.fixedVal.push_back(instance.to_original(state.fixedVal[static_cast<std::size_t>(j)]));
  }
  long persons = 0;
  for (int i = 0; i < n; ++i) {
    const double v = clean(instance.to_original(final[static_cast<std::size_t>(i)]), p.feasTol);
    out.utilities.push_back(v);
    out.fairMask.push_back(v <= anchor + p.delta + 0.5 * p.feasTol);
    out.total += instance.groups[static_cast<std::size_t>(i)] * v;
    persons += instance.groups[static_cast<std::size_t>(i)];
  }
  out.average = out.total / static_cast<double>(persons);
  out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

std::vector<SweepRow> sweep(const AllocationInstance& instance, const std::vector<double>& deltas,
                            const TradeoffParams& params, const RunOptions& options,
                            unsigned threads)
{
  if (deltas.empty()) { throw PreconditionError("sweep needs at least one delta"); }
  for (double d : deltas) {
    if (!(d >= 0.0) || !std::isfinite(d)) { throw PreconditionError("sweep deltas must be >= 0"); }
  }
  std::vector<SweepRow> rows(deltas.size());
  if (threads == 0) { threads = std::max(1u, std::thread::hardware_concurrency()); }
  threads = std::min<unsigned>(threads, static_cast<unsigned>(deltas.size()));

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < deltas.size(); i = next++) {
      SweepRow& row = rows[i];
      row.delta = deltas[i];
      TradeoffParams p = params;
      p.delta = deltas[i];
      try {
        row.outcome = run_sequence(instance, p, options);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) { pool.emplace_back(worker); }
  worker();
  for (std::thread& t : pool) { t.join(); }
  return rows;
}

std::vector<double> parse_delta_list(const std::string& text)
{
  const auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || !(v >= 0.0) || !std::isfinite(v)) {
      throw ParseError("bad delta '" + s + "' in '" + text + "' (deltas are finite and >= 0)");
    }
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) { parts.push_back(part); }
    if (parts.size() != 3) { throw ParseError("delta range must be a:b:step, got '" + text + "'"); }
    const double a = number(parts[0]), b = number(parts[1]), step = number(parts[2]);
    if (!(step > 0.0) || b < a) { throw ParseError("delta range needs a <= b and step > 0"); }
    const long count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= count; ++i) {
      // Index arithmetic keeps 0:16:0.1 free of accumulated drift.
      out.push_back(snap_to_grid(a + static_cast<double>(i) * step, 1e-12));
    }
    return out;
  }
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) { out.push_back(number(part)); }
  if (out.empty()) { throw ParseError("empty delta list"); }
  return out;
}

}  // namespace leximax
