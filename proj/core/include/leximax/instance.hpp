/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <string>
#include <vector>

#include "leximax/model.hpp"
#include "leximax/utility.hpp"

namespace leximax {

enum class InstanceKind { Healthcare, Shelter, ExplicitSet };

const char* to_string(InstanceKind kind);

/// A feasible utility set ready for the sequential procedure.
///
/// The welfare encodings need u >= 0, so utilities inside `feasible` are in
/// model units: model = original + offset. Bounds are in original units.
struct AllocationInstance {
  InstanceKind kind = InstanceKind::ExplicitSet;
  std::string name;
  FeasibleSetSpec feasible;
  GroupProfile groups = GroupProfile::unit(1);
  double utilityLow = 0.0;
  double utilityHigh = 0.0;
  double offset = 0.0;
  std::vector<std::string> partyNames;

  int parties() const { return feasible.parties; }
  double to_original(double modelValue) const { return modelValue - offset; }
  double to_model(double originalValue) const { return originalValue + offset; }
  void validate() const;
};

/// Bookkeeping between stages: which parties are fixed, at which values
/// (model units), and which remain active.
struct SequentialState {
  int parties = 0;
  int k = 1;
  std::vector<int> fixedIdx;
  std::vector<double> fixedVal;
  std::vector<int> active;

  static SequentialState initial(int parties);
  /// Fix party `index` at `value` and advance k. Rejects values below the
  /// last fixed one and indices that are not active.
  void fix(int index, double value);
  double anchor() const { return fixedVal.front(); }
  double last() const { return fixedVal.back(); }
  void validate() const;
};

}  // namespace leximax
