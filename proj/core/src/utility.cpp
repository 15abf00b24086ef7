/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "leximax/utility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "leximax/errors.hpp"

namespace leximax {

UtilityVector::UtilityVector(std::vector<double> values) : values_(std::move(values))
{
  if (values_.empty()) { throw PreconditionError("utility vector must have at least one entry"); }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw PreconditionError("utility " + std::to_string(i) + " is not finite");
    }
  }
}

UtilityVector::UtilityVector(std::initializer_list<double> values)
  : UtilityVector(std::vector<double>(values))
{
}

std::vector<double> UtilityVector::sorted() const
{
  std::vector<double> out = values_;
  std::stable_sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> UtilityVector::order() const
{
  std::vector<std::size_t> idx(values_.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values_[a] < values_[b]; });
  return idx;
}

double UtilityVector::min() const { return *std::min_element(values_.begin(), values_.end()); }

double UtilityVector::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

GroupProfile::GroupProfile(std::vector<int> sizes) : sizes_(std::move(sizes))
{
  if (sizes_.empty()) { throw PreconditionError("group profile must be non-empty"); }
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] < 1) {
      throw PreconditionError("group " + std::to_string(i) + " has size < 1");
    }
  }
}

GroupProfile::GroupProfile(std::initializer_list<int> sizes)
  : GroupProfile(std::vector<int>(sizes))
{
}

GroupProfile GroupProfile::unit(std::size_t n) { return GroupProfile(std::vector<int>(n, 1)); }

long GroupProfile::total() const { return std::accumulate(sizes_.begin(), sizes_.end(), 0L); }

bool GroupProfile::is_unit() const
{
  return std::all_of(sizes_.begin(), sizes_.end(), [](int s) { return s == 1; });
}

void TradeoffParams::validate() const
{
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw PreconditionError("delta must be finite and >= 0");
  }
  if (!(feasTol > 0.0) || !(intTol > 0.0)) { throw PreconditionError("tolerances must be > 0"); }
  if (bigM && !(*bigM > delta)) {
    throw PreconditionError("big-M (" + std::to_string(*bigM) + ") must exceed delta (" +
                            std::to_string(delta) + ")");
  }
  if (tieBreak.mode == TieBreak::Mode::Epsilon && !(tieBreak.epsilon >= 0.0)) {
    throw PreconditionError("tie-break epsilon must be >= 0");
  }
}

double TradeoffParams::big_m() const
{
  if (!bigM) { throw PreconditionError("big-M has not been set"); }
  return *bigM;
}

double snap_to_grid(double x, double tol)
{
  double inv = 1.0 / tol;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) < 1e-6 * rounded) { inv = rounded; }
  return std::round(x * inv) / inv;
}

}  // namespace leximax
