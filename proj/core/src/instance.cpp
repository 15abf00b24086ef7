/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "leximax/instance.hpp"

#include <algorithm>
#include <cmath>

#include "leximax/errors.hpp"

namespace leximax {

const char* to_string(InstanceKind kind)
{
  switch (kind) {
    case InstanceKind::Healthcare: return "healthcare";
    case InstanceKind::Shelter: return "shelter";
    case InstanceKind::ExplicitSet: return "explicit";
  }
  return "unknown";
}

void AllocationInstance::validate() const
{
  feasible.validate();
  if (groups.size() != static_cast<std::size_t>(feasible.parties)) {
    throw PreconditionError("group profile has " + std::to_string(groups.size()) +
                            " entries for " + std::to_string(feasible.parties) + " parties");
  }
  if (!partyNames.empty() && partyNames.size() != groups.size()) {
    throw PreconditionError("party names do not match the party count");
  }
  if (!std::isfinite(utilityLow) || !std::isfinite(utilityHigh) || utilityLow > utilityHigh) {
    throw PreconditionError("instance utility range must be finite and ordered");
  }
  if (!std::isfinite(offset) || utilityLow + offset < -1e-9) {
    throw PreconditionError("offset must shift every utility to >= 0");
  }
}

SequentialState SequentialState::initial(int parties)
{
  if (parties < 1) { throw PreconditionError("need at least one party"); }
  SequentialState state;
  state.parties = parties;
  state.k = 1;
  state.active.resize(static_cast<std::size_t>(parties));
  for (int i = 0; i < parties; ++i) { state.active[static_cast<std::size_t>(i)] = i; }
  return state;
}

void SequentialState::fix(int index, double value)
{
  const auto it = std::find(active.begin(), active.end(), index);
  if (it == active.end()) {
    throw PreconditionError("party " + std::to_string(index) + " is not active");
  }
  if (!fixedVal.empty() && value < fixedVal.back()) {
    throw PreconditionError("fixed utilities must be non-decreasing");
  }
  active.erase(it);
  fixedIdx.push_back(index);
  fixedVal.push_back(value);
  ++k;
}

void SequentialState::validate() const
{
  if (static_cast<std::size_t>(k) != fixedIdx.size() + 1 || fixedIdx.size() != fixedVal.size()) {
    throw PreconditionError("inconsistent sequential state: k does not match the fixed prefix");
  }
  if (fixedIdx.size() + active.size() != static_cast<std::size_t>(parties)) {
    throw PreconditionError("fixed and active indices must partition the parties");
  }
  std::vector<bool> seen(static_cast<std::size_t>(parties), false);
  for (const std::vector<int>* part : {&fixedIdx, &active}) {
    for (int i : *part) {
      if (i < 0 || i >= parties || seen[static_cast<std::size_t>(i)]) {
        throw PreconditionError("fixed and active indices must partition the parties");
      }
      seen[static_cast<std::size_t>(i)] = true;
    }
  }
  if (!std::is_sorted(fixedVal.begin(), fixedVal.end())) {
    throw PreconditionError("fixed utilities must be non-decreasing");
  }
}

}  // namespace leximax
