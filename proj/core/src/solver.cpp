/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "leximax/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <fstream>
#include <queue>
#include <random>
#include <sstream>
#include <string_view>

#include "leximax/errors.hpp"
#include "leximax/mps.hpp"
#include "leximax/simplex.hpp"

namespace leximax {

const char* to_string(SolveStatus status)
{
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::GapLimit: return "gap limit";
    case SolveStatus::TimeLimit: return "time limit";
    case SolveStatus::NumericalError: return "numerical error";
  }
  return "unknown";
}

void SolverConfig::validate() const
{
  if (!(absGap > 0.0) || !(relGap > 0.0) || !(feasTol > 0.0) || !(intTol > 0.0)) {
    throw PreconditionError("solver tolerances must be positive");
  }
  if (nodeLimit < 0 || timeLimit < 0.0) { throw PreconditionError("limits must be non-negative"); }
}

namespace {

using Clock = std::chrono::steady_clock;

struct BoundChange {
  int var;
  double lower;
  double upper;
};

struct Node {
  double bound;  // parent LP objective (or a strong-branching value), maximisation sense
  int depth;
  long id;
  std::vector<BoundChange> changes;
  int var = -1;        // binary fixed by the last change
  double parent = 0.0;  // parent LP objective
  double dist = 0.0;    // distance the branch moved var
};

// Per-unit objective loss of rounding a binary down or up, averaged over
// the branches seen so far.
struct Pseudocost {
  double sum[2] = {0.0, 0.0};
  int count[2] = {0, 0};

  void add(int dir, double loss, double dist)
  {
    if (dist <= 0.0) { return; }
    sum[dir] += std::max(loss, 0.0) / dist;
    ++count[dir];
  }
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const
  {
    if (a.bound != b.bound) { return a.bound < b.bound; }
    if (a.depth != b.depth) { return a.depth < b.depth; }
    return a.id > b.id;
  }
};

SolveStatus from_lp(LpStatus st)
{
  switch (st) {
    case LpStatus::Optimal: return SolveStatus::Optimal;
    case LpStatus::Infeasible: return SolveStatus::Infeasible;
    case LpStatus::Unbounded: return SolveStatus::Unbounded;
    case LpStatus::TimeLimit: return SolveStatus::TimeLimit;
    default: return SolveStatus::NumericalError;
  }
}

}  // namespace

Solution solve(const LinearModel& model, const SolverConfig& cfg)
{
  model.validate();
  cfg.validate();
  const auto start = Clock::now();
  LpOptions lpOpt;
  if (cfg.timeLimit > 0.0) {
    lpOpt.deadline = start + std::chrono::duration_cast<Clock::duration>(
                                 std::chrono::duration<double>(cfg.timeLimit));
  }
  SimplexLp lp(model, lpOpt);
  const double sense = model.objective().maximize ? 1.0 : -1.0;

  Solution sol;
  const auto finish = [&](Solution& s) -> Solution& {
    s.stats.lpIterations = lp.iterations();
    s.stats.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return s;
  };

  const LpStatus rootStatus = lp.solve();
  sol.stats.nodes = 1;
  if (rootStatus != LpStatus::Optimal) {
    sol.status = from_lp(rootStatus);
    sol.detail = std::string("root relaxation: ") + to_string(rootStatus);
    return finish(sol);
  }

  std::vector<int> binaries;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.variable(j).kind == VarKind::Binary) { binaries.push_back(j); }
  }
  std::vector<bool> primary(static_cast<std::size_t>(model.num_vars()), false);
  if (cfg.branchExtraFirst) {
    for (int j : model.roles().extra) { primary[static_cast<std::size_t>(j)] = true; }
  }
  if (cfg.relaxIntegrality || binaries.empty()) {
    sol.status = SolveStatus::Optimal;
    sol.values = lp.primal();
    sol.objective = lp.objective();
    sol.bestBound = sol.objective;
    if (cfg.onNode) { cfg.onNode(NodeInfo{0, 0, true, sol.objective, sol.objective, false}); }
    return finish(sol);
  }

  std::vector<std::pair<double, double>> rootBounds;
  for (int j : binaries) { rootBounds.push_back(lp.bounds(j)); }

  bool haveIncumbent = false;
  double incumbent = -kInf;  // maximisation sense
  std::vector<double> best;
  bool numericalTrouble = false;
  long nextId = 1;
  long processed = 0;
  const auto gapTol = [&](double value) {
    return std::max(cfg.absGap, cfg.relGap * std::abs(value));
  };

  const auto apply = [&](const std::vector<BoundChange>& changes) {
    for (std::size_t b = 0; b < binaries.size(); ++b) {
      lp.set_bounds(binaries[b], rootBounds[b].first, rootBounds[b].second);
    }
    for (const BoundChange& c : changes) { lp.set_bounds(c.var, c.lower, c.upper); }
  };

  // Fix the binaries at their rounded values and re-solve, so an accepted
  // point never leans on a binary that is only integral within intTol.
  const auto polish = [&](const std::vector<double>& x, std::vector<double>& out, double& obj) {
    for (int j : binaries) {
      const double r = std::round(x[static_cast<std::size_t>(j)]);
      lp.set_bounds(j, r, r);
    }
    if (lp.resolve() != LpStatus::Optimal || lp.refine() != LpStatus::Optimal) { return false; }
    out = lp.primal();
    for (int j : binaries) { out[static_cast<std::size_t>(j)] = std::round(out[static_cast<std::size_t>(j)]); }
    obj = sense * lp.objective();
    return true;
  };

  // Best-bound selection with plunging: after a branch the child on the
  // rounding side is solved next, so leaves (and incumbents) show up early.
  bool first = true;
  if (cfg.start.size() == static_cast<std::size_t>(model.num_vars())) {
    bool usable = model.max_violation(cfg.start).first <= cfg.feasTol;
    for (int j : binaries) {
      const double v = cfg.start[static_cast<std::size_t>(j)];
      usable = usable && std::abs(v - std::round(v)) <= cfg.intTol;
    }
    std::vector<double> polished;
    double obj = 0.0;
    if (usable && polish(cfg.start, polished, obj)) {
      haveIncumbent = true;
      incumbent = obj;
      best = std::move(polished);
      first = false;  // the LP now holds the polished point, not the root
    }
  }

  // Reliability branching: pseudocost product score, with strong branching
  // on the most fractional candidates whose pseudocosts are still unknown.
  std::vector<Pseudocost> costs(static_cast<std::size_t>(model.num_vars()));
  struct Branch {
    int var = -1;
    double child[2] = {kInf, kInf};  // known child bounds, -inf when infeasible
  };
  constexpr int kReliable = 2;
  constexpr std::size_t kStrongCandidates = 8;
  const auto estimate = [&](int j, int dir) {
    const Pseudocost& pc = costs[static_cast<std::size_t>(j)];
    if (pc.count[dir] > 0) { return pc.sum[dir] / pc.count[dir]; }
    double sum = 0.0;
    int n = 0;
    for (const Pseudocost& other : costs) {
      if (other.count[dir] > 0) {
        sum += other.sum[dir] / other.count[dir];
        ++n;
      }
    }
    return n > 0 ? sum / n : 1.0;
  };
  const auto score = [](double down, double up) {
    constexpr double eps = 1e-6;
    return std::max(down, eps) * std::max(up, eps);
  };
  const auto choose = [&](std::vector<int> candidates, const std::vector<double>& x, double value,
                          const std::vector<BoundChange>& changes) {
    const auto frac = [&](int j) { return x[static_cast<std::size_t>(j)]; };
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      return std::abs(frac(a) - 0.5) < std::abs(frac(b) - 0.5);
    });
    Branch best;
    double bestScore = -1.0;
    std::size_t strong = 0;
    for (int j : candidates) {
      const double f = frac(j);
      const Pseudocost& pc = costs[static_cast<std::size_t>(j)];
      Branch b;
      b.var = j;
      double s;
      if (std::min(pc.count[0], pc.count[1]) < kReliable && strong < kStrongCandidates) {
        ++strong;
        double loss[2] = {0.0, 0.0};
        for (int dir : {0, 1}) {
          apply(changes);
          lp.set_bounds(j, dir, dir);
          const LpStatus st = lp.resolve();
          if (st == LpStatus::Optimal) {
            b.child[dir] = sense * lp.objective();
            loss[dir] = std::max(value - b.child[dir], 0.0);
            costs[static_cast<std::size_t>(j)].add(dir, value - b.child[dir], dir == 1 ? 1.0 - f : f);
          } else if (st == LpStatus::Infeasible) {
            b.child[dir] = -kInf;
            loss[dir] = kInf;
          } else {
            loss[dir] = estimate(j, dir) * (dir == 1 ? 1.0 - f : f);
          }
        }
        const bool downDead = b.child[0] == -kInf ||
                              (haveIncumbent && b.child[0] <= incumbent + gapTol(incumbent));
        const bool upDead = b.child[1] == -kInf ||
                            (haveIncumbent && b.child[1] <= incumbent + gapTol(incumbent));
        if (downDead && upDead) { return Branch{}; }
        // A side that is empty or dominated makes this the branch to take.
        if (downDead || upDead) { return b; }
        s = score(loss[0], loss[1]);
      } else {
        s = score(estimate(j, 0) * f, estimate(j, 1) * (1.0 - f));
      }
      if (s > bestScore) {
        bestScore = s;
        best = b;
      }
    }
    return best;
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::optional<Node> plunge = Node{kInf, 0, 0, {}};
  SolveStatus limitStatus = SolveStatus::Optimal;

  while (plunge || !open.empty()) {
    if (!plunge) {
      if (haveIncumbent && open.top().bound <= incumbent + gapTol(incumbent)) { break; }
    } else if (haveIncumbent && plunge->bound <= incumbent + gapTol(incumbent)) {
      plunge.reset();
      continue;
    }
    if (cfg.nodeLimit > 0 && processed >= cfg.nodeLimit) {
      limitStatus = SolveStatus::GapLimit;
      break;
    }
    if (cfg.timeLimit > 0.0 && Clock::now() > *lpOpt.deadline) {
      limitStatus = SolveStatus::TimeLimit;
      break;
    }
    Node node;
    if (plunge) {
      node = std::move(*plunge);
      plunge.reset();
    } else {
      node = open.top();
      open.pop();
    }
    ++processed;

    LpStatus st;
    if (first) {
      st = rootStatus;
      first = false;
    } else {
      apply(node.changes);
      st = lp.resolve();
    }
    if (st == LpStatus::TimeLimit) {
      open.push(std::move(node));
      limitStatus = SolveStatus::TimeLimit;
      break;
    }
    const bool feasible = st == LpStatus::Optimal;
    const double value = feasible ? sense * lp.objective() : -kInf;
    if (feasible && node.var >= 0) {
      const int dir = std::round(lp.primal()[static_cast<std::size_t>(node.var)]) > 0.5 ? 1 : 0;
      costs[static_cast<std::size_t>(node.var)].add(dir, node.parent - value, node.dist);
    }
    if (cfg.onNode) {
      cfg.onNode(NodeInfo{node.id, node.depth, feasible, sense * value, sense * incumbent,
                          haveIncumbent});
    }
    if (st == LpStatus::Infeasible) { continue; }
    if (st != LpStatus::Optimal) {
      // Cannot prune safely; remember that the proof is incomplete.
      numericalTrouble = true;
      continue;
    }
    if (haveIncumbent && value <= incumbent + gapTol(incumbent)) { continue; }

    const std::vector<double> x = lp.primal();
    std::vector<int> candidates;
    for (bool tier : {true, false}) {
      for (int j : binaries) {
        if (primary[static_cast<std::size_t>(j)] != tier) { continue; }
        const double v = x[static_cast<std::size_t>(j)];
        if (std::abs(v - std::round(v)) > cfg.intTol) { candidates.push_back(j); }
      }
      if (!candidates.empty()) { break; }
    }
    if (candidates.empty()) {
      std::vector<double> polished;
      double obj = value;
      if (!polish(x, polished, obj)) {
        polished = x;
        obj = value;
      }
      if (!haveIncumbent || obj > incumbent) {
        haveIncumbent = true;
        incumbent = obj;
        best = std::move(polished);
      }
      continue;
    }
    const Branch br = choose(candidates, x, value, node.changes);
    if (br.var < 0) { continue; }  // strong branching proved both sides empty or dominated
    const double xv = x[static_cast<std::size_t>(br.var)];
    const double up = xv >= 0.5 ? 1.0 : 0.0;
    std::optional<Node> other;
    for (double side : {1.0 - up, up}) {
      const int dir = side > 0.5 ? 1 : 0;
      if (br.child[dir] == -kInf) { continue; }
      if (haveIncumbent && br.child[dir] <= incumbent + gapTol(incumbent)) { continue; }
      Node child{std::min(value, br.child[dir]), node.depth + 1, nextId++, node.changes, br.var, value,
                 std::abs(side - xv)};
      child.changes.push_back({br.var, side, side});
      (side == up ? plunge : other) = std::move(child);
    }
    // Dive on the rounding side, or on the other side when that one is gone.
    if (!plunge) {
      plunge = std::move(other);
    } else if (other) {
      open.push(std::move(*other));
    }
  }
  if (plunge) { open.push(std::move(*plunge)); }

  sol.stats.nodes = processed;
  if (!haveIncumbent) {
    if (limitStatus != SolveStatus::Optimal) {
      sol.status = limitStatus;
    } else {
      sol.status = numericalTrouble ? SolveStatus::NumericalError : SolveStatus::Infeasible;
    }
    sol.detail = numericalTrouble ? "some node relaxations failed numerically" : "";
    if (!open.empty()) { sol.bestBound = sense * open.top().bound; }
    return finish(sol);
  }
  double bound = incumbent;
  if (!open.empty()) { bound = std::max(bound, open.top().bound); }
  sol.values = std::move(best);
  sol.objective = sense * incumbent;
  sol.bestBound = sense * bound;
  if (limitStatus != SolveStatus::Optimal) {
    sol.status = limitStatus;
  } else if (numericalTrouble) {
    sol.status = SolveStatus::NumericalError;
    sol.detail = "some node relaxations failed numerically; incumbent not proven optimal";
  } else {
    sol.status = SolveStatus::Optimal;
  }
  return finish(sol);
}

Backend embedded_backend()
{
  return [](const LinearModel& model, const SolverConfig& cfg) { return solve(model, cfg); };
}

Backend external_backend(std::string command)
{
  if (command.empty()) { throw PreconditionError("external backend needs a command"); }
  return [command](const LinearModel& model, const SolverConfig& cfg) {
    namespace fs = std::filesystem;
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    const fs::path dir = fs::temp_directory_path() /
                         ("leximax-" + std::to_string(rng() & 0xffffffffffULL));
    fs::create_directories(dir);
    const fs::path mpsPath = dir / "model.mps";
    const fs::path solPath = dir / "solution.txt";
    const auto start = Clock::now();
    {
      std::ofstream out(mpsPath);
      out << export_mps(model);
    }
    const std::string cmd = command + " '" + mpsPath.string() + "' '" + solPath.string() + "'";
    const int rc = std::system(cmd.c_str());
    std::string text;
    if (std::ifstream in(solPath); in) {
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    if (rc != 0 && text.empty()) {
      throw SolverError("external backend '" + command + "' exited with status " +
                        std::to_string(rc));
    }
    Solution sol = import_solution(text, model, cfg.feasTol);
    sol.stats.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return sol;
  };
}

Backend make_backend(const std::string& spec)
{
  if (spec.empty() || spec == "embedded") { return embedded_backend(); }
  constexpr std::string_view prefix = "external:";
  if (spec.rfind(prefix, 0) == 0) { return external_backend(spec.substr(prefix.size())); }
  throw PreconditionError("unknown backend '" + spec + "' (expected embedded or external:<cmd>)");
}

}  // namespace leximax
