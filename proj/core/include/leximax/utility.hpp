/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace leximax {

/// Per-party utilities. Always non-empty with finite entries.
class UtilityVector {
 public:
  UtilityVector(std::vector<double> values);
  UtilityVector(std::initializer_list<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  /// Values in non-decreasing order (the order statistics u<1> <= ... <= u<n>).
  std::vector<double> sorted() const;
  /// Stable ordering permutation: order()[r] is the original index of u<r+1>.
  /// Ties keep the lower original index first.
  std::vector<std::size_t> order() const;
  double min() const;
  double sum() const;

  bool operator==(const UtilityVector& other) const = default;

 private:
  std::vector<double> values_;
};

/// Number of persons represented by each party.
class GroupProfile {
 public:
  GroupProfile(std::vector<int> sizes);
  GroupProfile(std::initializer_list<int> sizes);
  static GroupProfile unit(std::size_t n);

  std::size_t size() const { return sizes_.size(); }
  int operator[](std::size_t i) const { return sizes_[i]; }
  std::span<const int> sizes() const { return sizes_; }
  long total() const;
  bool is_unit() const;

  bool operator==(const GroupProfile& other) const = default;

 private:
  std::vector<int> sizes_;
};

struct TieBreak {
  enum class Mode { None, Hierarchical, Epsilon };
  Mode mode = Mode::Hierarchical;
  double epsilon = 0.0;  // only used by Mode::Epsilon

  static TieBreak none() { return {Mode::None, 0.0}; }
  static TieBreak hierarchical() { return {Mode::Hierarchical, 0.0}; }
  static TieBreak weighted(double eps) { return {Mode::Epsilon, eps}; }
};

/// Parameters shared by every stage solve.
struct TradeoffParams {
  double delta = 0.0;
  /// Big-M for the linearisation. When empty the sequential driver derives it
  /// from the instance's utility range (see compute_big_m).
  std::optional<double> bigM;
  double feasTol = 1e-6;
  double intTol = 1e-6;
  TieBreak tieBreak;

  /// Throws PreconditionError unless delta >= 0, tolerances > 0 and
  /// (when set) bigM > delta.
  void validate() const;
  /// bigM, or throws when it has not been set.
  double big_m() const;
};

/// Class-to-class utility transfer on a sorted vector: the lowRank smallest
/// entries each gain amount/lowRank, entries from rank highRank upwards each
/// lose amount/(n-highRank+1). Ranks are 1-based, 1 <= lowRank < highRank <= n.
struct TransferSpec {
  int lowRank = 1;
  int highRank = 2;
  double amount = 0.0;
};

/// Round x to the nearest multiple of tol. Integers survive exactly when tol
/// is a negative power of ten.
double snap_to_grid(double x, double tol);

}  // namespace leximax
