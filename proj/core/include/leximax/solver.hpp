/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "leximax/model.hpp"

namespace leximax {

/// GapLimit and TimeLimit mean the search stopped on the node or time limit
/// with the incumbent (if any) in `values` and a gap still open.
enum class SolveStatus { Optimal, Infeasible, Unbounded, GapLimit, TimeLimit, NumericalError };

const char* to_string(SolveStatus status);

struct SolveStats {
  long nodes = 0;
  long lpIterations = 0;
  double seconds = 0.0;
};

struct Solution {
  SolveStatus status = SolveStatus::NumericalError;
  std::vector<double> values;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double bestBound = std::numeric_limits<double>::quiet_NaN();
  SolveStats stats;
  std::string detail;

  bool optimal() const { return status == SolveStatus::Optimal; }
};

/// Snapshot handed to SolverConfig::onNode after each node's LP solve.
/// Objectives are in the model's sense.
struct NodeInfo {
  long id = 0;
  int depth = 0;
  bool feasible = false;
  double lpObjective = 0.0;
  double incumbent = 0.0;
  bool hasIncumbent = false;
};

struct SolverConfig {
  double absGap = 1e-9;
  double relGap = 1e-6;
  double feasTol = 1e-6;
  double intTol = 1e-6;
  long nodeLimit = 0;        // 0 = unlimited
  double timeLimit = 0.0;    // seconds, 0 = unlimited
  bool relaxIntegrality = false;
  /// Branch on the feasible-set binaries (model.roles().extra) before any
  /// other fractional binary.
  bool branchExtraFirst = false;
  /// Optional starting point. Used as the first incumbent when it meets every
  /// row and bound within feasTol with integral binaries, ignored otherwise.
  std::vector<double> start;
  std::function<void(const NodeInfo&)> onNode;

  void validate() const;
};

/// Branch-and-bound over the embedded simplex. Branching is reliability
/// based (strong branching until a binary has pseudocost history); nodes are
/// taken best-bound first with plunging. Integral incumbents are polished by
/// an LP with the binaries fixed, so returned continuous values are
/// consistent with exact 0/1 binaries.
Solution solve(const LinearModel& model, const SolverConfig& cfg);

/// A way of solving a model: the embedded solver or an external program.
using Backend = std::function<Solution(const LinearModel&, const SolverConfig&)>;

Backend embedded_backend();

/// Runs `command <model.mps> <solution.txt>` through the shell and imports
/// the listing it writes. A listing line "# status: infeasible" (or
/// unbounded) reports that status instead of values.
Backend external_backend(std::string command);

/// "embedded" or "external:<cmd>".
Backend make_backend(const std::string& spec);

}  // namespace leximax
