/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "leximax/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include "leximax/errors.hpp"
#include "leximax/milp.hpp"
#include "leximax/swf.hpp"

namespace leximax {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kScoreTol = 1e-9;

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string join(const std::vector<double>& v)
{
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) { out += (i ? "," : "") + fmt(v[i]); }
  return out + ")";
}

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> split_fields(const std::string& line)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) { out.push_back(std::move(cur)); }
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) { out.push_back(std::move(cur)); }
  return out;
}

}  // namespace

GroupProfile ExplicitSet::profile() const
{
  return groups ? *groups : GroupProfile::unit(static_cast<std::size_t>(parties()));
}

void ExplicitSet::validate() const
{
  if (candidates.empty()) { throw PreconditionError("explicit set has no candidates"); }
  const std::size_t n = candidates.front().size();
  for (const UtilityVector& c : candidates) {
    if (c.size() != n) { throw PreconditionError("explicit set candidates differ in length"); }
  }
  if (groups && groups->size() != n) {
    throw PreconditionError("explicit set group profile does not match the party count");
  }
}

ExplicitSet parse_explicit_set(std::string_view text)
{
  ExplicitSet set;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineNo = 0;
  std::size_t width = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    if (const auto hash = raw.find('#'); hash != std::string::npos) { raw.erase(hash); }
    std::vector<std::string> fields = split_fields(raw);
    if (fields.empty()) { continue; }
    const std::string where = "line " + std::to_string(lineNo) + ": ";
    bool sizes = false;
    if (fields[0] == "sizes" || fields[0] == "sizes:") {
      sizes = true;
      fields.erase(fields.begin());
    }
    std::vector<double> values;
    for (const std::string& f : fields) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(f, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != f.size() || !std::isfinite(v)) { throw ParseError(where + "bad number '" + f + "'"); }
      values.push_back(v);
    }
    if (width == 0) { width = values.size(); }
    if (values.size() != width) {
      throw ParseError(where + "expected " + std::to_string(width) + " values, found " +
                       std::to_string(values.size()));
    }
    if (sizes) {
      if (set.groups) { throw ParseError(where + "duplicate sizes line"); }
      std::vector<int> s;
      for (double v : values) {
        if (v < 1.0 || v != std::floor(v)) { throw ParseError(where + "group sizes must be positive integers"); }
        s.push_back(static_cast<int>(v));
      }
      set.groups = GroupProfile(std::move(s));
    } else {
      set.candidates.emplace_back(std::move(values));
    }
  }
  if (set.candidates.empty()) { throw ParseError("explicit set has no candidate vectors"); }
  set.validate();
  return set;
}

std::string serialize_explicit_set(const ExplicitSet& set)
{
  set.validate();
  std::ostringstream out;
  if (set.groups) {
    out << "sizes";
    for (int s : set.groups->sizes()) { out << "," << s; }
    out << "\n";
  }
  for (const UtilityVector& c : set.candidates) {
    for (std::size_t i = 0; i < c.size(); ++i) { out << (i ? "," : "") << fmt(c[i]); }
    out << "\n";
  }
  return out.str();
}

AllocationInstance to_instance(const ExplicitSet& set, std::string name)
{
  set.validate();
  const int n = set.parties();
  const int m = static_cast<int>(set.candidates.size());
  double lo = set.candidates.front()[0];
  double hi = lo;
  for (const UtilityVector& c : set.candidates) {
    for (double v : c.values()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  AllocationInstance inst;
  inst.kind = InstanceKind::ExplicitSet;
  inst.name = std::move(name);
  inst.groups = set.profile();
  inst.utilityLow = lo;
  inst.utilityHigh = hi;
  inst.offset = std::max(0.0, -lo);

  FeasibleSetSpec& spec = inst.feasible;
  spec.parties = n;
  SpecRow pick{"pick", {}, RowSense::Equal, 1.0};
  for (int c = 0; c < m; ++c) {
    spec.extraVars.push_back(Variable{"sel" + std::to_string(c + 1), 0.0, 1.0, VarKind::Binary});
    pick.terms.push_back({spec.extra_ref(c), 1.0});
  }
  spec.rows.push_back(std::move(pick));
  for (int i = 0; i < n; ++i) {
    SpecRow def{"def" + std::to_string(i + 1), {{i, 1.0}}, RowSense::Equal, 0.0};
    for (int c = 0; c < m; ++c) {
      const double v = set.candidates[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] + inst.offset;
      if (v != 0.0) { def.terms.push_back({spec.extra_ref(c), -v}); }
    }
    spec.rows.push_back(std::move(def));
  }
  return inst;
}

OracleOutcome enumerate_optimal(const ExplicitSet& set, double delta, const TieBreak& tieBreak,
                                FinalAssembly assembly)
{
  set.validate();
  if (!(delta >= 0.0)) { throw PreconditionError("delta must be >= 0"); }
  const int n = set.parties();
  const GroupProfile s = set.profile();
  const auto& cand = set.candidates;
  const auto total = [&](const UtilityVector& u) {
    double t = 0.0;
    for (int i = 0; i < n; ++i) { t += s[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)]; }
    return t;
  };

  OracleOutcome result;
  SocialOutcome& out = result.outcome;
  std::vector<int> fixedIdx;
  std::vector<double> fixedVal;
  std::vector<int> active(static_cast<std::size_t>(n));
  std::iota(active.begin(), active.end(), 0);

  const auto flag = [&](const std::string& why) {
    if (!result.ambiguous) { result.ambiguity = why; }
    result.ambiguous = true;
  };
  // Lowest-index argmin over the active parties of one candidate.
  const auto argmin = [&](const UtilityVector& u) {
    int best = active.front();
    for (int i : active) {
      if (u[static_cast<std::size_t>(i)] < u[static_cast<std::size_t>(best)]) { best = i; }
    }
    return std::pair<int, double>{best, u[static_cast<std::size_t>(best)]};
  };

  std::vector<int> previousTied;
  int previousChoice = -1;
  int finalChoice = -1;
  int K = 0;
  for (int k = 1; k <= n; ++k) {
    std::vector<int> pool;
    for (int c = 0; c < static_cast<int>(cand.size()); ++c) {
      const UtilityVector& u = cand[static_cast<std::size_t>(c)];
      bool ok = true;
      for (std::size_t j = 0; j < fixedIdx.size() && ok; ++j) {
        ok = std::abs(u[static_cast<std::size_t>(fixedIdx[j])] - fixedVal[j]) <= kScoreTol;
      }
      for (int i : active) {
        if (!ok) { break; }
        ok = fixedVal.empty() || u[static_cast<std::size_t>(i)] >= fixedVal.back() - kScoreTol;
      }
      if (ok) { pool.push_back(c); }
    }
    if (pool.empty()) { throw PreconditionError("no candidate matches the fixed prefix at stage " + std::to_string(k)); }

    std::vector<double> score;
    for (int c : pool) {
      const UtilityVector& u = cand[static_cast<std::size_t>(c)];
      double v;
      if (k == 1) {
        v = eval_G1(u, s, delta);
      } else {
        std::vector<double> unfixed;
        std::vector<int> sizes;
        for (int i : active) {
          unfixed.push_back(u[static_cast<std::size_t>(i)]);
          sizes.push_back(s[static_cast<std::size_t>(i)]);
        }
        v = eval_Gbar_k(unfixed, sizes, fixedVal, delta, k);
      }
      if (tieBreak.mode == TieBreak::Mode::Epsilon) { v += tieBreak.epsilon * total(u); }
      score.push_back(v);
    }
    const double best = *std::max_element(score.begin(), score.end());
    std::vector<int> tied;
    for (std::size_t p = 0; p < pool.size(); ++p) {
      if (score[p] >= best - kScoreTol) { tied.push_back(pool[p]); }
    }
    if (tieBreak.mode == TieBreak::Mode::Hierarchical) {
      double bestTotal = -kInf;
      for (int c : tied) { bestTotal = std::max(bestTotal, total(cand[static_cast<std::size_t>(c)])); }
      std::erase_if(tied, [&](int c) { return total(cand[static_cast<std::size_t>(c)]) < bestTotal - kScoreTol; });
    }

    const int chosen = tied.front();
    const auto [ik, uk] = argmin(cand[static_cast<std::size_t>(chosen)]);
    for (int c : tied) {
      const auto [i2, u2] = argmin(cand[static_cast<std::size_t>(c)]);
      if (i2 != ik || std::abs(u2 - uk) > kScoreTol) {
        flag("stage " + std::to_string(k) + ": tied candidates fix different parties or values");
      }
    }
    IterationLog entry;
    entry.k = k;
    entry.fixedIndex = ik;
    entry.fixedValue = uk;
    entry.z = best;
    const auto& cv = cand[static_cast<std::size_t>(chosen)].values();
    entry.utilities.assign(cv.begin(), cv.end());
    out.log.push_back(std::move(entry));

    const bool leaves = k > 1 && uk - fixedVal.front() > delta;
    const auto distinct = [&](const std::vector<int>& group) {
      for (int c : group) {
        if (!(cand[static_cast<std::size_t>(c)] == cand[static_cast<std::size_t>(group.front())])) { return true; }
      }
      return false;
    };
    if (leaves) {
      const std::vector<int>& source = assembly == FinalAssembly::TerminalSolve ? tied : previousTied;
      finalChoice = assembly == FinalAssembly::TerminalSolve ? chosen : previousChoice;
      if (distinct(source)) { flag("the final vector depends on which tied optimum is returned"); }
      break;
    }
    fixedIdx.push_back(ik);
    fixedVal.push_back(uk);
    std::erase(active, ik);
    K = k;
    previousTied = tied;
    previousChoice = chosen;
    finalChoice = chosen;
    if (k == n && distinct(tied)) { flag("the final vector depends on which tied optimum is returned"); }
  }

  out.K = K;
  out.fixedIdx = fixedIdx;
  out.fixedVal = fixedVal;
  const UtilityVector& fin = cand[static_cast<std::size_t>(finalChoice)];
  out.utilities.assign(fin.values().begin(), fin.values().end());
  long persons = 0;
  for (int i = 0; i < n; ++i) {
    out.fairMask.push_back(fin[static_cast<std::size_t>(i)] <= fixedVal.front() + delta);
    persons += s[static_cast<std::size_t>(i)];
  }
  out.total = total(fin);
  out.average = out.total / static_cast<double>(persons);
  return result;
}

UtilityVector leximax_oracle(const ExplicitSet& set)
{
  set.validate();
  std::size_t best = 0;
  std::vector<double> bestSorted = set.candidates.front().sorted();
  for (std::size_t c = 1; c < set.candidates.size(); ++c) {
    std::vector<double> sorted = set.candidates[c].sorted();
    if (std::lexicographical_compare(bestSorted.begin(), bestSorted.end(), sorted.begin(), sorted.end())) {
      best = c;
      bestSorted = std::move(sorted);
    }
  }
  return set.candidates[best];
}

double utilitarian_optimum(const ExplicitSet& set)
{
  set.validate();
  const GroupProfile s = set.profile();
  double best = -kInf;
  for (const UtilityVector& c : set.candidates) {
    double t = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) { t += s[i] * c[i]; }
    best = std::max(best, t);
  }
  return best;
}

// ---------------------------------------------------------------------------
// C-M property

std::string CmReport::text() const
{
  std::ostringstream out;
  out << "cm-property: " << trials << " trials, " << checks << " comparisons, " << skipped
      << " skipped, " << violations.size() << " violations\n";
  for (const CmViolation& v : violations) {
    out << "  violation k=" << v.k << " delta=" << fmt(v.delta) << " l=" << v.spec.lowRank
        << " h=" << v.spec.highRank << " eps=" << fmt(v.spec.amount) << " u=" << join(v.before)
        << " -> " << join(v.after) << " value " << fmt(v.valueBefore) << " -> " << fmt(v.valueAfter)
        << "\n";
  }
  return out.str();
}

CmReport check_cm_property(int kMax, long trials, std::uint64_t seed, Fault fault)
{
  if (trials < 1) { throw PreconditionError("trials must be >= 1"); }
  std::mt19937_64 rng(seed);
  CmReport report;
  report.trials = trials;
  for (long t = 0; t < trials; ++t) {
    const int n = std::uniform_int_distribution<int>(3, 8)(rng);
    std::vector<double> raw(static_cast<std::size_t>(n));
    // Coarse values so ties, and therefore the fair-region boundaries, occur.
    std::uniform_int_distribution<int> value(0, 40);
    for (double& v : raw) { v = value(rng) * 0.5; }
    std::sort(raw.begin(), raw.end());
    const double delta = std::uniform_int_distribution<int>(0, 30)(rng) * 0.5;

    const int l = std::uniform_int_distribution<int>(1, n - 1)(rng);
    const int h = std::uniform_int_distribution<int>(l + 1, n)(rng);
    double gap = kInf;
    for (int i = 1; i < n; ++i) {
      const double d = raw[static_cast<std::size_t>(i)] - raw[static_cast<std::size_t>(i - 1)];
      if (d > 0.0) { gap = std::min(gap, d); }
    }
    if (raw[static_cast<std::size_t>(l - 1)] >= raw[static_cast<std::size_t>(h - 1)] || gap == kInf) {
      ++report.skipped;
      continue;
    }
    const TransferSpec spec{l, h, 0.1 * gap};
    const UtilityVector u(raw);
    UtilityVector moved = u;
    try {
      moved = cm_transfer(u, spec);
    } catch (const PreconditionError&) {
      ++report.skipped;
      continue;
    }
    const int top = kMax <= 0 ? n : std::min(kMax, n);
    for (int k = 1; k <= top; ++k) {
      const auto f = [&](const UtilityVector& x) {
        if (k == 1) { return eval_F1(x, delta); }
        return fault == Fault::BranchFormFk ? eval_Fk_branch_form(x, delta, k) : eval_Fk(x, delta, k);
      };
      const double before = f(u);
      const double after = f(moved);
      ++report.checks;
      if (after < before - 1e-9) {
        const auto& mv = moved.values();
        report.violations.push_back(CmViolation{raw, {mv.begin(), mv.end()}, spec, delta, k, before, after});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Encoding fidelity and cut safety

bool FidelityReport::passed(double tol) const
{
  return failures == 0 && maxError <= tol && maxCutShift <= tol && maxLpLoosen <= 1e-9 &&
         maxCutSlack <= 1e-9;
}

std::string FidelityReport::text() const
{
  std::ostringstream out;
  out << "encoding-fidelity: " << cases.size() << " solves, max |z - formula| = " << fmt(maxError)
      << ", max cut shift = " << fmt(maxCutShift) << ", max LP loosening = " << fmt(maxLpLoosen)
      << ", max cut violation = " << fmt(maxCutSlack) << ", failures = " << failures << ", "
      << fmt(seconds) << " s\n";
  for (const FidelityCase& c : cases) {
    if (!c.status.empty() || std::abs(c.milp - c.formula) > 1e-6) {
      out << "  instance " << c.instance << (c.grouped ? " grouped" : " unit") << " k=" << c.k
          << " formula=" << fmt(c.formula) << " milp=" << fmt(c.milp)
          << (c.status.empty() ? "" : " status=" + c.status) << "\n";
    }
  }
  return out.str();
}

std::string FidelityReport::csv() const
{
  std::ostringstream out;
  out << "instance,grouped,n,k,delta,bigM,formula,milp,milp_cuts,lp,lp_cuts\n";
  for (const FidelityCase& c : cases) {
    out << c.instance << "," << c.grouped << "," << c.n << "," << c.k << "," << fmt(c.delta) << ","
        << fmt(c.bigM) << "," << fmt(c.formula) << "," << fmt(c.milp) << "," << fmt(c.milpCuts)
        << "," << fmt(c.lp) << "," << fmt(c.lpCuts) << "\n";
  }
  return out.str();
}

FidelityReport check_encoding_fidelity(long instances, std::uint64_t seed, const SolverConfig& cfg,
                                       Fault fault)
{
  if (instances < 1) { throw PreconditionError("instances must be >= 1"); }
  const auto start = Clock::now();
  std::mt19937_64 rng(seed);
  FidelityReport report;
  SolverConfig lpCfg = cfg;
  lpCfg.relaxIntegrality = true;

  const auto run = [&](const LinearModel& model, const SolverConfig& c, std::string& status) {
    const Solution sol = solve(model, c);
    if (!sol.optimal()) {
      status = to_string(sol.status);
      return std::numeric_limits<double>::quiet_NaN();
    }
    return sol.objective;
  };

  for (long t = 0; t < instances; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 6)(rng);
    std::vector<double> u(static_cast<std::size_t>(n));
    for (double& v : u) { v = std::uniform_int_distribution<int>(0, 20)(rng); }
    const double range = *std::max_element(u.begin(), u.end()) - *std::min_element(u.begin(), u.end());
    const double delta = std::round(std::uniform_real_distribution<double>(0.0, range)(rng) * 1000.0) / 1000.0;
    std::vector<int> sizes(static_cast<std::size_t>(n));
    for (int& s : sizes) { s = std::uniform_int_distribution<int>(1, 5)(rng); }

    TradeoffParams params;
    params.delta = delta;
    params.bigM = std::max(range, delta) * 1.001 + 1.0;
    const UtilityVector uv(u);
    const std::vector<std::size_t> order = uv.order();
    const FeasibleSetSpec pins = pinned_utilities(u);

    for (bool grouped : {false, true}) {
      const GroupProfile s = grouped ? GroupProfile(sizes) : GroupProfile::unit(static_cast<std::size_t>(n));
      for (int k = 1; k <= n; ++k) {
        FidelityCase fc;
        fc.instance = static_cast<int>(t);
        fc.grouped = grouped;
        fc.n = n;
        fc.k = k;
        fc.delta = delta;
        fc.bigM = *params.bigM;
        fc.milpCuts = fc.lpCuts = std::numeric_limits<double>::quiet_NaN();

        SequentialState state = SequentialState::initial(n);
        for (int j = 0; j + 1 < k; ++j) { state.fix(static_cast<int>(order[static_cast<std::size_t>(j)]), u[order[static_cast<std::size_t>(j)]]); }
        LinearModel model = k == 1 ? encode_P1(n, s, params) : encode_Pk(state, s, params);
        model = attach_feasible_set(model, pins);

        if (k == 1) {
          fc.formula = eval_G1(uv, s, delta);
        } else {
          std::vector<double> unfixed;
          std::vector<int> unfixedSizes;
          for (int i : state.active) {
            unfixed.push_back(u[static_cast<std::size_t>(i)]);
            unfixedSizes.push_back(s[static_cast<std::size_t>(i)]);
          }
          fc.formula = eval_Gbar_k(unfixed, unfixedSizes, state.fixedVal, delta, k);
          if (fault == Fault::BranchFormFk && !grouped) {
            double prefix = 0.0;
            for (int j = 1; j < k; ++j) { prefix += (n - j + 1) * state.fixedVal[static_cast<std::size_t>(j - 1)]; }
            fc.formula = eval_Fk_branch_form(uv, delta, k) - prefix;
          }
        }
        fc.milp = run(model, cfg, fc.status);
        fc.lp = run(model, lpCfg, fc.status);
        if (k >= 2) {
          const LinearModel cut = add_valid_cuts(model, state, s, params);
          fc.milpCuts = run(cut, cfg, fc.status);
          fc.lpCuts = run(cut, lpCfg, fc.status);
          // Cuts must hold at the exact point (u, z = formula value).
          std::vector<double> point(static_cast<std::size_t>(cut.num_vars()), 0.0);
          point[static_cast<std::size_t>(cut.roles().z)] = fc.formula;
          for (int i = 0; i < n; ++i) { point[static_cast<std::size_t>(cut.roles().u[static_cast<std::size_t>(i)])] = u[static_cast<std::size_t>(i)]; }
          for (int r = model.num_rows(); r < cut.num_rows(); ++r) {
            const Row& row = cut.rows()[static_cast<std::size_t>(r)];
            double lhs = 0.0;
            for (const Term& term : row.terms) { lhs += term.coef * point[static_cast<std::size_t>(term.var)]; }
            report.maxCutSlack = std::max(report.maxCutSlack, lhs - row.rhs);
          }
          report.maxCutShift = std::max(report.maxCutShift, std::abs(fc.milpCuts - fc.milp));
          report.maxLpLoosen = std::max(report.maxLpLoosen, fc.lpCuts - fc.lp);
        }
        const double err = std::abs(fc.milp - fc.formula);
        if (!fc.status.empty() || std::isnan(err)) {
          ++report.failures;
        } else {
          report.maxError = std::max(report.maxError, err);
        }
        report.cases.push_back(std::move(fc));
      }
    }
  }
  report.seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------
// Oracle equivalence and regime limits

std::string EquivalenceReport::text() const
{
  std::ostringstream out;
  out << "oracle-equivalence: " << instances << " instances (" << unambiguous << " compared exactly, "
      << ambiguous << " ambiguous, membership only), " << mismatches << " mismatches; regime checks "
      << regimeChecks << ", failures " << regimeFailures << ", " << fmt(seconds) << " s\n";
  for (const std::string& f : failures) { out << "  " << f << "\n"; }
  return out.str();
}

EquivalenceReport check_oracle_equivalence(long target, std::uint64_t seed, const TieBreak& tieBreak,
                                           const RunOptions& options)
{
  if (target < 1) { throw PreconditionError("target must be >= 1"); }
  const auto start = Clock::now();
  std::mt19937_64 rng(seed);
  EquivalenceReport report;
  const auto close = [](const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) { return false; }
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::abs(a[i] - b[i]) > 1e-6) { return false; }
    }
    return true;
  };
  const auto vec = [](const UtilityVector& u) { return std::vector<double>(u.values().begin(), u.values().end()); };

  for (long attempt = 0; report.unambiguous < target && attempt < 20 * target; ++attempt) {
    ExplicitSet set;
    const int n = std::uniform_int_distribution<int>(2, 6)(rng);
    const int m = std::uniform_int_distribution<int>(1, 8)(rng);
    for (int c = 0; c < m; ++c) {
      std::vector<double> v(static_cast<std::size_t>(n));
      for (double& x : v) { x = std::uniform_int_distribution<int>(0, 10)(rng); }
      set.candidates.emplace_back(std::move(v));
    }
    if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
      std::vector<int> s(static_cast<std::size_t>(n));
      for (int& x : s) { x = std::uniform_int_distribution<int>(1, 3)(rng); }
      set.groups = GroupProfile(std::move(s));
    }
    const double delta = std::uniform_int_distribution<int>(0, 10)(rng);
    const AllocationInstance inst = to_instance(set);
    const std::string tag = "instance " + std::to_string(attempt) + " (delta " + fmt(delta) + ")";
    ++report.instances;

    TradeoffParams params;
    params.delta = delta;
    params.tieBreak = tieBreak;
    try {
      const OracleOutcome ref = enumerate_optimal(set, delta, tieBreak, options.assembly);
      const SocialOutcome got = run_sequence(inst, params, options);
      if (ref.ambiguous) {
        ++report.ambiguous;
        const bool member = std::any_of(set.candidates.begin(), set.candidates.end(),
                                        [&](const UtilityVector& c) { return close(vec(c), got.utilities); });
        if (!member) {
          ++report.mismatches;
          report.failures.push_back(tag + ": MILP outcome " + join(got.utilities) + " is not a candidate");
        }
      } else {
        ++report.unambiguous;
        if (!close(ref.outcome.utilities, got.utilities) || ref.outcome.K != got.K) {
          ++report.mismatches;
          report.failures.push_back(tag + ": oracle " + join(ref.outcome.utilities) + " K=" +
                                    std::to_string(ref.outcome.K) + " vs MILP " + join(got.utilities) +
                                    " K=" + std::to_string(got.K));
        }
      }

      // Delta = 0 collapses to the utilitarian optimum.
      TradeoffParams zero = params;
      zero.delta = 0.0;
      const SocialOutcome util = run_sequence(inst, zero, options);
      ++report.regimeChecks;
      if (std::abs(util.total - utilitarian_optimum(set)) > 1e-6) {
        ++report.regimeFailures;
        report.failures.push_back(tag + ": delta=0 total " + fmt(util.total) + " vs utilitarian " +
                                  fmt(utilitarian_optimum(set)));
      }

      // Delta >= range gives the leximax candidate when no tie-break steers the path.
      const double range = inst.utilityHigh - inst.utilityLow;
      TradeoffParams wide = params;
      wide.delta = range + 1.0;
      wide.tieBreak = TieBreak::none();
      const OracleOutcome wideRef = enumerate_optimal(set, wide.delta, wide.tieBreak, options.assembly);
      if (!wideRef.ambiguous) {
        const SocialOutcome lex = run_sequence(inst, wide, options);
        const std::vector<double> want = leximax_oracle(set).sorted();
        ++report.regimeChecks;
        if (!close(UtilityVector(lex.utilities).sorted(), want)) {
          ++report.regimeFailures;
          report.failures.push_back(tag + ": wide delta gives " + join(lex.utilities) + ", leximax is " +
                                    join(want));
        }
      }
    } catch (const std::exception& e) {
      ++report.mismatches;
      report.failures.push_back(tag + ": " + e.what());
    }
  }
  if (report.unambiguous < target) {
    report.failures.push_back("only " + std::to_string(report.unambiguous) + " unambiguous instances drawn");
    ++report.mismatches;
  }
  report.seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------
// Relaxation gap diagnostic

std::string GapReport::text() const
{
  std::ostringstream out;
  double worst = 0.0, worstCuts = 0.0, worstPinned = 0.0;
  long cutsTighter = 0, stage2 = 0;
  for (const GapRow& r : rows) {
    const double gap = r.lp - r.milp;
    if (r.pinned) {
      worstPinned = std::max(worstPinned, gap);
    } else {
      worst = std::max(worst, gap);
    }
    if (r.stage >= 2) {
      ++stage2;
      worstCuts = std::max(worstCuts, r.lpCuts - r.milp);
      if (r.lpCuts < r.lp - 1e-9) { ++cutsTighter; }
    }
  }
  out << "relaxation-gap: " << rows.size() << " rows; max LP-MILP gap " << fmt(worst)
      << " (boxed), " << fmt(worstPinned) << " (stage 1, u pinned); stage 2 with cuts max gap "
      << fmt(worstCuts) << ", cuts tightened " << cutsTighter << " of " << stage2 << "\n";
  return out.str();
}

std::string GapReport::csv() const
{
  std::ostringstream out;
  out << "trial,n,stage,pinned,milp,lp,lp_cuts\n";
  for (const GapRow& r : rows) {
    out << r.trial << "," << r.n << "," << r.stage << "," << r.pinned << "," << fmt(r.milp) << ","
        << fmt(r.lp) << "," << fmt(r.lpCuts) << "\n";
  }
  return out.str();
}

GapReport relaxation_gap_report(int nMin, int nMax, long trials, std::uint64_t seed,
                                const SolverConfig& cfg)
{
  if (trials < 1 || nMin < 2 || nMax < nMin) { throw PreconditionError("bad gap report parameters"); }
  std::mt19937_64 rng(seed);
  GapReport report;
  SolverConfig lpCfg = cfg;
  lpCfg.relaxIntegrality = true;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto value = [](const Solution& s) { return s.optimal() ? s.objective : std::numeric_limits<double>::quiet_NaN(); };

  for (long t = 0; t < trials; ++t) {
    const int n = std::uniform_int_distribution<int>(nMin, nMax)(rng);
    FeasibleSetSpec box;
    box.parties = n;
    double sumHi = 0.0;
    SpecRow budget{"budget", {}, RowSense::LessEqual, 0.0};
    for (int i = 0; i < n; ++i) {
      const double hi = std::uniform_int_distribution<int>(1, 20)(rng);
      box.utilityBounds.emplace_back(0.0, hi);
      budget.terms.push_back({i, 1.0});
      sumHi += hi;
    }
    budget.rhs = std::round(sumHi * std::uniform_real_distribution<double>(0.4, 0.9)(rng));
    box.rows.push_back(budget);

    TradeoffParams params;
    params.delta = std::uniform_int_distribution<int>(0, 10)(rng);
    params.bigM = std::max(20.0, params.delta) * 1.001 + 1.0;
    const GroupProfile s = GroupProfile::unit(static_cast<std::size_t>(n));

    const LinearModel p1 = attach_feasible_set(encode_P1(n, s, params), box);
    const Solution m1 = solve(p1, cfg);
    report.rows.push_back({static_cast<int>(t), n, 1, false, value(m1), value(solve(p1, lpCfg)), nan});
    if (!m1.optimal()) { continue; }

    std::vector<double> u;
    for (int id : p1.roles().u) { u.push_back(std::round(m1.values[static_cast<std::size_t>(id)])); }
    const LinearModel pinned = attach_feasible_set(encode_P1(n, s, params), pinned_utilities(u));
    report.rows.push_back({static_cast<int>(t), n, 1, true, value(solve(pinned, cfg)),
                           value(solve(pinned, lpCfg)), nan});

    SequentialState state = SequentialState::initial(n);
    int i1 = 0;
    for (int i = 1; i < n; ++i) {
      if (m1.values[static_cast<std::size_t>(p1.roles().u[static_cast<std::size_t>(i)])] <
          m1.values[static_cast<std::size_t>(p1.roles().u[static_cast<std::size_t>(i1)])] - 1e-9) {
        i1 = i;
      }
    }
    state.fix(i1, snap_to_grid(m1.values[static_cast<std::size_t>(p1.roles().u[static_cast<std::size_t>(i1)])], 1e-6));
    const LinearModel p2 = attach_feasible_set(encode_Pk(state, s, params), box);
    const LinearModel p2cuts = add_valid_cuts(p2, state, s, params);
    report.rows.push_back({static_cast<int>(t), n, 2, false, value(solve(p2, cfg)), value(solve(p2, lpCfg)),
                           value(solve(p2cuts, lpCfg))});
  }
  return report;
}

}  // namespace leximax
