/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "leximax/instance.hpp"
#include "leximax/solver.hpp"
#include "leximax/utility.hpp"

namespace leximax {

/// Which solve supplies the utilities of the parties left unfixed.
enum class FinalAssembly {
  TerminalSolve,  // the solve whose new minimum left the fair region (default)
  PreviousStage,  // the last solve whose minimum stayed in the fair region
};

struct RunOptions {
  bool cuts = false;
  /// Per-row big-M from implied utility bounds.
  bool tightenBigM = true;
  /// Node budget of each hierarchical tie-break solve (0 = none). On the
  /// limit the best point found is kept: it is optimal for the stage
  /// objective, only its total utility is unproven.
  long tieBreakNodeLimit = 5000;
  FinalAssembly assembly = FinalAssembly::TerminalSolve;
  Backend backend;  // empty selects the embedded solver
  SolverConfig solver;
};

/// One stage solve. Utility values are in original units.
struct IterationLog {
  int k = 0;
  int fixedIndex = -1;
  double fixedValue = 0.0;
  double z = 0.0;
  double seconds = 0.0;
  long nodes = 0;
  bool tieBreakProven = true;
  std::vector<double> utilities;
};

struct SocialOutcome {
  std::vector<double> utilities;  // original units
  int K = 0;
  std::vector<int> fixedIdx;      // first K fixed parties
  std::vector<double> fixedVal;   // their utilities, original units
  std::vector<IterationLog> log;  // every solve, including the terminal one
  std::vector<bool> fairMask;     // utility <= first fixed value + delta
  double total = 0.0;             // sum_i s_i u_i
  double average = 0.0;           // total / N
  double offset = 0.0;            // model = original + offset
  double seconds = 0.0;

  int solves() const { return static_cast<int>(log.size()); }
};

/// Solve P1, then P2, P3, ... fixing the smallest unfixed utility after each
/// stage, until a new minimum exceeds the first one by more than delta or
/// every party is fixed. Throws InfeasibleError when P1 has no solution and
/// SolverError (with the stage number) when a stage cannot be solved.
SocialOutcome run_sequence(const AllocationInstance& instance, const TradeoffParams& params,
                           const RunOptions& options = {});

struct SweepRow {
  double delta = 0.0;
  std::optional<SocialOutcome> outcome;
  std::string error;
};

/// Independent run_sequence per delta, computed on up to `threads` workers
/// (0 picks the hardware concurrency). Rows come back in input order; a
/// failing delta records its error and the sweep continues.
std::vector<SweepRow> sweep(const AllocationInstance& instance, const std::vector<double>& deltas,
                            const TradeoffParams& params, const RunOptions& options = {},
                            unsigned threads = 0);

/// Parses "a:b:step" (inclusive of b up to rounding) or "v1,v2,...".
std::vector<double> parse_delta_list(const std::string& text);

}  // namespace leximax
