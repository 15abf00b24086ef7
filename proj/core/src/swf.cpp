/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "leximax/swf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "leximax/errors.hpp"

namespace leximax {

namespace {

double hinge(double x) { return x > 0.0 ? x : 0.0; }

void require_delta(double delta)
{
  if (!(delta >= 0.0)) { throw PreconditionError("delta must be >= 0"); }
}

void require_rank(int k, std::size_t n)
{
  if (k < 2 || static_cast<std::size_t>(k) > n) {
    throw PreconditionError("k = " + std::to_string(k) + " outside [2, " + std::to_string(n) +
                            "]");
  }
}

void require_fixed_prefix(std::span<const double> unfixed, std::span<const double> fixed, int k)
{
  if (fixed.empty() || static_cast<std::size_t>(k) != fixed.size() + 1) {
    throw PreconditionError("k must equal the number of fixed utilities plus one (k >= 2)");
  }
  if (unfixed.empty()) { throw PreconditionError("no unfixed utilities"); }
  for (std::size_t j = 1; j < fixed.size(); ++j) {
    if (fixed[j] < fixed[j - 1]) { throw PreconditionError("fixed utilities must be non-decreasing"); }
  }
  for (double u : unfixed) {
    if (!std::isfinite(u)) { throw PreconditionError("unfixed utility is not finite"); }
    if (u < fixed.back()) {
      throw PreconditionError("unfixed utility below the last fixed utility");
    }
  }
}

}  // namespace

int fair_count(const UtilityVector& u, double delta)
{
  require_delta(delta);
  const double floor = u.min();
  int t = 0;
  for (double x : u.values()) {
    if (x - floor <= delta) { ++t; }
  }
  return t;
}

double eval_F1(const UtilityVector& u, double delta)
{
  require_delta(delta);
  const double n = static_cast<double>(u.size());
  const double lo = u.min();
  double tail = 0.0;
  for (double x : u.values()) { tail += hinge(x - lo - delta); }
  return n * lo + (n - 1.0) * delta + tail;
}

double eval_Fk(const UtilityVector& u, double delta, int k)
{
  require_delta(delta);
  require_rank(k, u.size());
  const std::vector<double> s = u.sorted();
  const int n = static_cast<int>(s.size());
  double value = 0.0;
  for (int i = 1; i < k; ++i) { value += (n - i + 1) * s[i - 1]; }
  value += (n - k + 1) * std::min(s[0] + delta, s[k - 1]);
  for (int i = k; i <= n; ++i) { value += hinge(s[i - 1] - s[0] - delta); }
  return value;
}

double eval_Fk_branch_form(const UtilityVector& u, double delta, int k)
{
  require_delta(delta);
  require_rank(k, u.size());
  const std::vector<double> s = u.sorted();
  const int n = static_cast<int>(s.size());
  const int t = fair_count(u, delta);
  if (t < k) { return std::accumulate(s.begin(), s.end(), 0.0); }
  double value = 0.0;
  for (int i = 1; i <= k; ++i) { value += (n - i + 1) * s[i - 1]; }
  for (int i = t + 1; i <= n; ++i) { value += s[i - 1] - s[0] - delta; }
  return value;
}

double eval_Fbar_k(std::span<const double> unfixed, std::span<const double> fixed, double delta,
                   int k)
{
  require_delta(delta);
  require_fixed_prefix(unfixed, fixed, k);
  const double anchor = fixed.front();
  const double lowest = *std::min_element(unfixed.begin(), unfixed.end());
  double value = static_cast<double>(unfixed.size()) * std::min(anchor + delta, lowest);
  for (double x : unfixed) { value += hinge(x - anchor - delta); }
  return value;
}

double eval_G1(const UtilityVector& u, const GroupProfile& s, double delta)
{
  require_delta(delta);
  if (s.size() != u.size()) { throw PreconditionError("group profile length mismatch"); }
  const double total = static_cast<double>(s.total());
  const double lo = u.min();
  double tail = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) { tail += s[i] * hinge(u[i] - lo - delta); }
  return (total - 1.0) * delta + total * lo + tail;
}

double eval_Gbar_k(std::span<const double> unfixed, std::span<const int> unfixedSizes,
                   std::span<const double> fixed, double delta, int k)
{
  require_delta(delta);
  require_fixed_prefix(unfixed, fixed, k);
  if (unfixedSizes.size() != unfixed.size()) {
    throw PreconditionError("group sizes must align with the unfixed utilities");
  }
  const double anchor = fixed.front();
  const double lowest = *std::min_element(unfixed.begin(), unfixed.end());
  double weight = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < unfixed.size(); ++i) {
    if (unfixedSizes[i] < 1) { throw PreconditionError("group size < 1"); }
    weight += unfixedSizes[i];
    tail += unfixedSizes[i] * hinge(unfixed[i] - anchor - delta);
  }
  return weight * std::min(anchor + delta, lowest) + tail;
}

double gini(const UtilityVector& u)
{
  const double total = u.sum();
  if (!(total > 0.0)) { throw PreconditionError("gini requires positive total utility"); }
  // sum_{i<j} |u_i - u_j| over the sorted vector is sum_r (2r - n - 1) u<r>.
  const std::vector<double> s = u.sorted();
  const double n = static_cast<double>(s.size());
  double pairs = 0.0;
  for (std::size_t r = 0; r < s.size(); ++r) {
    pairs += (2.0 * static_cast<double>(r + 1) - n - 1.0) * s[r];
  }
  return pairs / (n * total);
}

double alpha_welfare(const UtilityVector& u, double alpha)
{
  if (!(alpha >= 0.0)) { throw PreconditionError("alpha must be >= 0"); }
  if (alpha >= 1.0) {
    for (double x : u.values()) {
      if (!(x > 0.0)) { throw PreconditionError("alpha >= 1 requires strictly positive utilities"); }
    }
  }
  double value = 0.0;
  if (alpha == 1.0) {
    for (double x : u.values()) { value += std::log(x); }
    return value;
  }
  for (double x : u.values()) {
    if (x < 0.0) { throw PreconditionError("alpha-fairness needs non-negative utilities"); }
    value += std::pow(x, 1.0 - alpha);
  }
  return value / (1.0 - alpha);
}

double convex_comb_welfare(const UtilityVector& u, double lambda, FairnessTerm kind)
{
  if (!(lambda >= 0.0 && lambda <= 1.0)) { throw PreconditionError("lambda must lie in [0, 1]"); }
  const double fairness = kind == FairnessTerm::Maximin ? u.min() : 1.0 - gini(u);
  return (1.0 - lambda) * u.sum() + lambda * fairness;
}

UtilityVector cm_transfer(const UtilityVector& uSorted, const TransferSpec& spec)
{
  const std::span<const double> u = uSorted.values();
  const int n = static_cast<int>(u.size());
  if (!std::is_sorted(u.begin(), u.end())) {
    throw PreconditionError("transfer requires a non-decreasing vector");
  }
  if (spec.lowRank < 1 || spec.lowRank >= spec.highRank || spec.highRank > n) {
    throw PreconditionError("transfer ranks must satisfy 1 <= low < high <= n");
  }
  if (u[spec.lowRank - 1] >= u[spec.highRank - 1]) {
    throw PreconditionError("transfer requires u_low < u_high");
  }
  if (!(spec.amount > 0.0) || !std::isfinite(spec.amount)) {
    throw PreconditionError("transfer amount must be positive");
  }
  std::vector<double> out(u.begin(), u.end());
  const double gain = spec.amount / spec.lowRank;
  const double loss = spec.amount / (n - spec.highRank + 1);
  for (int i = 0; i < spec.lowRank; ++i) { out[i] += gain; }
  for (int i = spec.highRank - 1; i < n; ++i) { out[i] -= loss; }
  if (!std::is_sorted(out.begin(), out.end())) {
    throw PreconditionError("transfer amount too large: result is no longer sorted");
  }
  return UtilityVector(std::move(out));
}

}  // namespace leximax
