/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "leximax/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace leximax {

namespace {
// Pivots since the last factorisation below which B^-1 is reused as is.
constexpr int kCheapPivots = 16;
}  // namespace

const char* to_string(LpStatus status)
{
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration limit";
    case LpStatus::TimeLimit: return "time limit";
    case LpStatus::NumericalError: return "numerical error";
  }
  return "unknown";
}

SimplexLp::SimplexLp(const LinearModel& model, LpOptions options) : opt_(options)
{
  n_ = model.num_vars();
  m_ = model.num_rows();
  maximize_ = model.objective().maximize;
  const int total = n_ + 2 * m_;

  cols_.assign(static_cast<std::size_t>(n_), {});
  for (int r = 0; r < m_; ++r) {
    // Merge repeated terms so each column holds one entry per row.
    std::map<int, double> merged;
    for (const Term& t : model.rows()[static_cast<std::size_t>(r)].terms) { merged[t.var] += t.coef; }
    for (auto [var, coef] : merged) {
      if (coef != 0.0) { cols_[static_cast<std::size_t>(var)].emplace_back(r, coef); }
    }
  }

  cost_.assign(static_cast<std::size_t>(total), 0.0);
  for (const Term& t : model.objective().terms) {
    cost_[static_cast<std::size_t>(t.var)] += maximize_ ? -t.coef : t.coef;
  }

  lo_.assign(static_cast<std::size_t>(total), 0.0);
  hi_.assign(static_cast<std::size_t>(total), 0.0);
  for (int j = 0; j < n_; ++j) {
    lo_[j] = model.variable(j).lower;
    hi_[j] = model.variable(j).upper;
  }
  for (int r = 0; r < m_; ++r) {
    const Row& row = model.rows()[static_cast<std::size_t>(r)];
    const int s = n_ + r;
    lo_[s] = row.sense == RowSense::LessEqual ? -kInf : row.rhs;
    hi_[s] = row.sense == RowSense::GreaterEqual ? kInf : row.rhs;
  }
  sign_.assign(static_cast<std::size_t>(m_), 1.0);
  x_.assign(static_cast<std::size_t>(total), 0.0);
  state_.assign(static_cast<std::size_t>(total), State::AtLower);
  head_.assign(static_cast<std::size_t>(m_), 0);
  binv_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), 0.0);
}

void SimplexLp::set_bounds(int var, double lower, double upper)
{
  lo_.at(static_cast<std::size_t>(var)) = lower;
  hi_.at(static_cast<std::size_t>(var)) = upper;
}

double SimplexLp::dot_column(const std::vector<double>& vec, int j) const
{
  if (j < n_) {
    double acc = 0.0;
    for (auto [r, a] : cols_[static_cast<std::size_t>(j)]) { acc += vec[r] * a; }
    return acc;
  }
  if (j < n_ + m_) { return -vec[j - n_]; }
  return sign_[j - n_ - m_] * vec[j - n_ - m_];
}

void SimplexLp::ftran(int j, std::vector<double>& alpha) const
{
  alpha.assign(static_cast<std::size_t>(m_), 0.0);
  const auto add = [&](int r, double a) {
    for (int i = 0; i < m_; ++i) { alpha[i] += binv_[static_cast<std::size_t>(i) * m_ + r] * a; }
  };
  if (j < n_) {
    for (auto [r, a] : cols_[static_cast<std::size_t>(j)]) { add(r, a); }
  } else if (j < n_ + m_) {
    add(j - n_, -1.0);
  } else {
    add(j - n_ - m_, sign_[j - n_ - m_]);
  }
}

void SimplexLp::compute_duals(const std::vector<double>& cost, std::vector<double>& y) const
{
  y.assign(static_cast<std::size_t>(m_), 0.0);
  for (int i = 0; i < m_; ++i) {
    const double c = cost[head_[i]];
    if (c == 0.0) { continue; }
    const double* row = &binv_[static_cast<std::size_t>(i) * m_];
    for (int r = 0; r < m_; ++r) { y[r] += c * row[r]; }
  }
}

double SimplexLp::reduced_cost(const std::vector<double>& cost, const std::vector<double>& y,
                               int j) const
{
  return cost[j] - dot_column(y, j);
}

void SimplexLp::pivot(int row, int entering, const std::vector<double>& alpha)
{
  double* prow = &binv_[static_cast<std::size_t>(row) * m_];
  const double inv = 1.0 / alpha[row];
  for (int r = 0; r < m_; ++r) { prow[r] *= inv; }
  for (int i = 0; i < m_; ++i) {
    if (i == row || alpha[i] == 0.0) { continue; }
    double* irow = &binv_[static_cast<std::size_t>(i) * m_];
    const double f = alpha[i];
    for (int r = 0; r < m_; ++r) { irow[r] -= f * prow[r]; }
  }
  head_[row] = entering;
  state_[entering] = State::Basic;
  ++sinceRefactor_;
}

bool SimplexLp::refactor()
{
  const std::size_t m = static_cast<std::size_t>(m_);
  // Gauss-Jordan on [B | I] with partial pivoting.
  std::vector<double> b(m * m, 0.0);
  std::vector<double> col(m);
  for (int i = 0; i < m_; ++i) {
    const int j = head_[i];
    if (j < n_) {
      for (auto [r, a] : cols_[static_cast<std::size_t>(j)]) { b[static_cast<std::size_t>(r) * m + i] = a; }
    } else if (j < n_ + m_) {
      b[static_cast<std::size_t>(j - n_) * m + i] = -1.0;
    } else {
      b[static_cast<std::size_t>(j - n_ - m_) * m + i] = sign_[j - n_ - m_];
    }
  }
  std::vector<double> inv(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) { inv[i * m + i] = 1.0; }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t best = c;
    for (std::size_t r = c + 1; r < m; ++r) {
      if (std::abs(b[r * m + c]) > std::abs(b[best * m + c])) { best = r; }
    }
    if (std::abs(b[best * m + c]) < 1e-11) { return false; }
    if (best != c) {
      std::swap_ranges(b.begin() + static_cast<long>(best * m), b.begin() + static_cast<long>((best + 1) * m),
                       b.begin() + static_cast<long>(c * m));
      std::swap_ranges(inv.begin() + static_cast<long>(best * m),
                       inv.begin() + static_cast<long>((best + 1) * m),
                       inv.begin() + static_cast<long>(c * m));
    }
    const double p = 1.0 / b[c * m + c];
    for (std::size_t k = 0; k < m; ++k) {
      b[c * m + k] *= p;
      inv[c * m + k] *= p;
    }
    for (std::size_t r = 0; r < m; ++r) {
      const double f = b[r * m + c];
      if (r == c || f == 0.0) { continue; }
      for (std::size_t k = 0; k < m; ++k) {
        b[r * m + k] -= f * b[c * m + k];
        inv[r * m + k] -= f * inv[c * m + k];
      }
    }
  }
  // Row i of B^-1 belongs to basic position i because B's columns are basic positions.
  binv_ = std::move(inv);
  sinceRefactor_ = 0;
  recompute_basics();
  return true;
}

void SimplexLp::recompute_basics()
{
  // B x_B = -N x_N since every row reads A x - s (+ artificial) = 0.
  std::vector<double> rhs(static_cast<std::size_t>(m_), 0.0);
  const int total = n_ + 2 * m_;
  for (int j = 0; j < total; ++j) {
    if (state_[j] == State::Basic || x_[j] == 0.0) { continue; }
    if (j < n_) {
      for (auto [r, a] : cols_[static_cast<std::size_t>(j)]) { rhs[r] -= a * x_[j]; }
    } else if (j < n_ + m_) {
      rhs[j - n_] += x_[j];
    } else {
      rhs[j - n_ - m_] -= sign_[j - n_ - m_] * x_[j];
    }
  }
  for (int i = 0; i < m_; ++i) {
    const double* row = &binv_[static_cast<std::size_t>(i) * m_];
    double acc = 0.0;
    for (int r = 0; r < m_; ++r) { acc += row[r] * rhs[r]; }
    x_[head_[i]] = acc;
  }
}

double SimplexLp::infeasibility(int j) const
{
  const double scale = opt_.primalTol;
  if (x_[j] < lo_[j] - scale * std::max(1.0, std::abs(lo_[j]))) { return lo_[j] - x_[j]; }
  if (x_[j] > hi_[j] + scale * std::max(1.0, std::abs(hi_[j]))) { return x_[j] - hi_[j]; }
  return 0.0;
}

bool SimplexLp::tick()
{
  ++iterations_;
  if (opt_.deadline && (iterations_ & 63) == 0 && std::chrono::steady_clock::now() > *opt_.deadline) {
    timedOut_ = true;
    return false;
  }
  return true;
}

LpStatus SimplexLp::primal_loop(const std::vector<double>& cost)
{
  const int total = n_ + 2 * m_;
  std::vector<double> y;
  std::vector<double> alpha;
  int degenerate = 0;
  long local = 0;
  while (true) {
    if (!tick()) { return LpStatus::TimeLimit; }
    if (++local > limit_) { return LpStatus::IterationLimit; }
    if (sinceRefactor_ >= opt_.refactorEvery && !refactor()) { return LpStatus::NumericalError; }
    const bool bland = degenerate >= opt_.blandAfter;

    compute_duals(cost, y);
    int q = -1;
    double best = 0.0;
    double dq = 0.0;
    for (int j = 0; j < total; ++j) {
      const State st = state_[j];
      if (st == State::Basic || lo_[j] == hi_[j]) { continue; }
      const double d = reduced_cost(cost, y, j);
      const bool improving = (st == State::AtLower && d < -opt_.dualTol) ||
                             (st == State::AtUpper && d > opt_.dualTol) ||
                             (st == State::Free && std::abs(d) > opt_.dualTol);
      if (!improving) { continue; }
      if (bland) {
        q = j;
        dq = d;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        q = j;
        dq = d;
      }
    }
    if (q < 0) { return LpStatus::Optimal; }

    const double dir = dq < 0.0 ? 1.0 : -1.0;
    ftran(q, alpha);

    // Harris two-pass ratio test. Pass one finds the step allowed by bounds
    // relaxed by the primal tolerance, pass two takes the largest pivot
    // among rows blocking within that step.
    double relaxed = kInf;
    for (int i = 0; i < m_; ++i) {
      const double a = dir * alpha[i];
      const int b = head_[i];
      const double tol = opt_.primalTol * std::max(1.0, std::abs(x_[b]));
      if (a > opt_.pivotTol && lo_[b] > -kInf) {
        relaxed = std::min(relaxed, (x_[b] - lo_[b] + tol) / a);
      } else if (a < -opt_.pivotTol && hi_[b] < kInf) {
        relaxed = std::min(relaxed, (hi_[b] - x_[b] + tol) / -a);
      }
    }
    const double flip = hi_[q] - lo_[q];
    int leave = -1;
    double theta = kInf;
    bool toUpper = false;
    if (relaxed < kInf) {
      double pivotSize = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double a = dir * alpha[i];
        const int b = head_[i];
        double ratio;
        bool upper;
        if (a > opt_.pivotTol && lo_[b] > -kInf) {
          ratio = (x_[b] - lo_[b]) / a;
          upper = false;
        } else if (a < -opt_.pivotTol && hi_[b] < kInf) {
          ratio = (hi_[b] - x_[b]) / -a;
          upper = true;
        } else {
          continue;
        }
        if (ratio > relaxed) { continue; }
        bool take = leave < 0;
        if (!take && bland) {
          take = ratio < theta - 1e-12 || (ratio <= theta + 1e-12 && head_[i] < head_[leave]);
        } else if (!take) {
          take = std::abs(a) > pivotSize;
        }
        if (take) {
          leave = i;
          pivotSize = std::abs(a);
          theta = std::max(ratio, 0.0);
          toUpper = upper;
        }
      }
    }
    if (flip < theta) {
      // Bound flip: the entering variable reaches its opposite bound first.
      for (int i = 0; i < m_; ++i) { x_[head_[i]] -= dir * flip * alpha[i]; }
      if (state_[q] == State::AtLower) {
        state_[q] = State::AtUpper;
        x_[q] = hi_[q];
      } else {
        state_[q] = State::AtLower;
        x_[q] = lo_[q];
      }
      degenerate = 0;
      continue;
    }
    if (leave < 0) { return LpStatus::Unbounded; }

    for (int i = 0; i < m_; ++i) { x_[head_[i]] -= dir * theta * alpha[i]; }
    x_[q] += dir * theta;
    const int out = head_[leave];
    x_[out] = toUpper ? hi_[out] : lo_[out];
    state_[out] = toUpper ? State::AtUpper : State::AtLower;
    pivot(leave, q, alpha);
    degenerate = theta <= 1e-12 ? degenerate + 1 : 0;
  }
}

LpStatus SimplexLp::dual_loop()
{
  const int total = n_ + 2 * m_;
  std::vector<double> y;
  std::vector<double> rho(static_cast<std::size_t>(m_));
  std::vector<double> alpha;
  long local = 0;
  while (true) {
    if (!tick()) { return LpStatus::TimeLimit; }
    if (++local > limit_) { return LpStatus::IterationLimit; }
    if (sinceRefactor_ >= opt_.refactorEvery && !refactor()) { return LpStatus::NumericalError; }

    int p = -1;
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double inf = infeasibility(head_[i]);
      if (inf > worst) {
        worst = inf;
        p = i;
      }
    }
    if (p < 0) { return LpStatus::Optimal; }

    const int leaving = head_[p];
    const bool goingUp = x_[leaving] < lo_[leaving];
    const double target = goingUp ? lo_[leaving] : hi_[leaving];
    std::copy_n(&binv_[static_cast<std::size_t>(p) * m_], m_, rho.begin());
    compute_duals(cost_, y);

    int q = -1;
    double bestRatio = kInf;
    double bestPivot = 0.0;
    for (int j = 0; j < total; ++j) {
      const State st = state_[j];
      if (st == State::Basic || lo_[j] == hi_[j]) { continue; }
      const double apj = dot_column(rho, j);
      // x_leaving moves by -apj per unit increase of x_j.
      const double gain = goingUp ? -apj : apj;
      double ratio;
      if (st == State::AtLower && gain > opt_.pivotTol) {
        ratio = std::max(reduced_cost(cost_, y, j), 0.0) / gain;
      } else if (st == State::AtUpper && gain < -opt_.pivotTol) {
        ratio = std::max(-reduced_cost(cost_, y, j), 0.0) / -gain;
      } else if (st == State::Free && std::abs(gain) > opt_.pivotTol) {
        ratio = std::abs(reduced_cost(cost_, y, j)) / std::abs(gain);
      } else {
        continue;
      }
      if (ratio < bestRatio - opt_.dualTol ||
          (ratio <= bestRatio + opt_.dualTol && std::abs(gain) > bestPivot)) {
        bestRatio = std::min(ratio, bestRatio);
        bestPivot = std::abs(gain);
        q = j;
      }
    }
    if (q < 0) { return LpStatus::Infeasible; }

    ftran(q, alpha);
    if (std::abs(alpha[p]) < opt_.pivotTol) {
      if (!refactor()) { return LpStatus::NumericalError; }
      continue;
    }
    const double step = (x_[leaving] - target) / alpha[p];
    for (int i = 0; i < m_; ++i) { x_[head_[i]] -= alpha[i] * step; }
    x_[q] += step;
    x_[leaving] = target;
    state_[leaving] = goingUp ? State::AtLower : State::AtUpper;
    pivot(p, q, alpha);
  }
}

LpStatus SimplexLp::cold_start()
{
  const int total = n_ + 2 * m_;
  for (int j = 0; j < n_; ++j) {
    if (lo_[j] > -kInf) {
      state_[j] = State::AtLower;
      x_[j] = lo_[j];
    } else if (hi_[j] < kInf) {
      state_[j] = State::AtUpper;
      x_[j] = hi_[j];
    } else {
      state_[j] = State::Free;
      x_[j] = 0.0;
    }
  }
  std::vector<double> activity(static_cast<std::size_t>(m_), 0.0);
  for (int j = 0; j < n_; ++j) {
    if (x_[j] == 0.0) { continue; }
    for (auto [r, a] : cols_[static_cast<std::size_t>(j)]) { activity[r] += a * x_[j]; }
  }

  std::fill(binv_.begin(), binv_.end(), 0.0);
  std::vector<double> phase1(static_cast<std::size_t>(total), 0.0);
  bool needPhase1 = false;
  for (int r = 0; r < m_; ++r) {
    const int s = n_ + r;
    const int art = n_ + m_ + r;
    const double act = activity[r];
    const double tol = opt_.primalTol * std::max(1.0, std::abs(act));
    lo_[art] = 0.0;
    hi_[art] = 0.0;
    x_[art] = 0.0;
    state_[art] = State::AtLower;
    if (act >= lo_[s] - tol && act <= hi_[s] + tol) {
      head_[r] = s;
      state_[s] = State::Basic;
      x_[s] = act;
      binv_[static_cast<std::size_t>(r) * m_ + r] = -1.0;
      continue;
    }
    // Park the slack on its violated bound and let an artificial carry the gap.
    const bool above = act > hi_[s];
    const double bound = above ? hi_[s] : lo_[s];
    state_[s] = above ? State::AtUpper : State::AtLower;
    x_[s] = bound;
    sign_[r] = bound - act > 0.0 ? 1.0 : -1.0;
    hi_[art] = kInf;
    x_[art] = std::abs(bound - act);
    state_[art] = State::Basic;
    head_[r] = art;
    binv_[static_cast<std::size_t>(r) * m_ + r] = sign_[r];
    phase1[art] = 1.0;
    needPhase1 = true;
  }
  sinceRefactor_ = 0;

  if (needPhase1) {
    const LpStatus st = primal_loop(phase1);
    if (st != LpStatus::Optimal) { return st == LpStatus::Unbounded ? LpStatus::NumericalError : st; }
    double scale = 1.0;
    for (int j = 0; j < n_ + m_; ++j) {
      if (std::isfinite(lo_[j])) { scale = std::max(scale, std::abs(lo_[j])); }
      if (std::isfinite(hi_[j])) { scale = std::max(scale, std::abs(hi_[j])); }
    }
    // The Harris ratio test lets basics overshoot by the primal tolerance, so
    // artificials are judged against a few multiples of it; verify() removes
    // what is left.
    for (int r = 0; r < m_; ++r) {
      if (x_[n_ + m_ + r] > 10.0 * opt_.primalTol * scale) { return LpStatus::Infeasible; }
    }
    for (int r = 0; r < m_; ++r) {
      const int art = n_ + m_ + r;
      hi_[art] = 0.0;
      if (state_[art] != State::Basic) { x_[art] = 0.0; }
    }
  }
  return primal_loop(cost_);
}

LpStatus SimplexLp::verify(bool fresh)
{
  // Recompute x_B from a fresh factorisation and repair drift with a few
  // dual pivots; the basis is dual feasible at this point.
  for (int round = 0; round < 3; ++round) {
    // A handful of product-form updates is accurate enough for the first look.
    if (round == 0 && !fresh && sinceRefactor_ <= kCheapPivots) {
      recompute_basics();
    } else if (!refactor()) {
      return LpStatus::NumericalError;
    }
    bool clean = true;
    for (int i = 0; i < m_ && clean; ++i) { clean = infeasibility(head_[i]) == 0.0; }
    if (clean) { return LpStatus::Optimal; }
    LpStatus st = dual_loop();
    if (st == LpStatus::Optimal) { st = primal_loop(cost_); }
    if (st != LpStatus::Optimal) { return st; }
  }
  return LpStatus::NumericalError;
}

LpStatus SimplexLp::solve()
{
  warm_ = false;
  timedOut_ = false;
  limit_ = opt_.iterationLimit > 0 ? opt_.iterationLimit : 20000L + 50L * (n_ + 2L * m_);
  LpStatus st = cold_start();
  if (st == LpStatus::Optimal) { st = verify(true); }
  warm_ = st == LpStatus::Optimal;
  return st;
}

LpStatus SimplexLp::resolve()
{
  if (!warm_) { return solve(); }
  timedOut_ = false;
  const int total = n_ + 2 * m_;
  std::vector<double> y;
  compute_duals(cost_, y);
  for (int j = 0; j < total; ++j) {
    if (state_[j] == State::Basic) { continue; }
    if (lo_[j] == hi_[j]) {
      state_[j] = State::AtLower;
      x_[j] = lo_[j];
      continue;
    }
    const double d = reduced_cost(cost_, y, j);
    State want = state_[j];
    if (d > opt_.dualTol) {
      want = State::AtLower;
    } else if (d < -opt_.dualTol) {
      want = State::AtUpper;
    } else if (want == State::Free || (want == State::AtLower && lo_[j] == -kInf) ||
               (want == State::AtUpper && hi_[j] == kInf)) {
      want = lo_[j] > -kInf ? State::AtLower : (hi_[j] < kInf ? State::AtUpper : State::Free);
    }
    if ((want == State::AtLower && lo_[j] == -kInf) || (want == State::AtUpper && hi_[j] == kInf)) {
      return solve();  // not dual feasible for the new bounds
    }
    state_[j] = want;
    x_[j] = want == State::AtLower ? lo_[j] : (want == State::AtUpper ? hi_[j] : 0.0);
  }
  if (sinceRefactor_ <= kCheapPivots) {
    recompute_basics();
  } else if (!refactor()) {
    return solve();
  }

  LpStatus st = dual_loop();
  if (st == LpStatus::Infeasible) {
    // Check the certificate against a fresh factorisation before a caller
    // prunes on it.
    if (!refactor()) { return solve(); }
    st = dual_loop();
    if (st == LpStatus::Infeasible) { return st; }
  }
  if (st == LpStatus::Optimal) { st = primal_loop(cost_); }
  if (st == LpStatus::Optimal) { st = verify(false); }
  if (st == LpStatus::TimeLimit) {
    warm_ = false;
    return st;
  }
  if (st != LpStatus::Optimal) { return solve(); }
  return st;
}

LpStatus SimplexLp::refine()
{
  if (!warm_) { return solve(); }
  const LpStatus st = verify(true);
  if (st != LpStatus::Optimal) { return solve(); }
  return st;
}

std::vector<double> SimplexLp::primal() const
{
  return {x_.begin(), x_.begin() + n_};
}

double SimplexLp::objective() const
{
  double obj = 0.0;
  for (int j = 0; j < n_; ++j) { obj += cost_[j] * x_[j]; }
  return maximize_ ? -obj : obj;
}

}  // namespace leximax
