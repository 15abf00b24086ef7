/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "leximax/instance.hpp"
#include "leximax/sequential.hpp"
#include "leximax/solver.hpp"
#include "leximax/utility.hpp"

// Brute-force references for explicit finite feasible sets and the property
// harness built on them. Nothing here calls the MILP path except the checks
// whose job is to compare against it.

namespace leximax {

struct ExplicitSet {
  std::vector<UtilityVector> candidates;
  std::optional<GroupProfile> groups;

  int parties() const { return static_cast<int>(candidates.front().size()); }
  GroupProfile profile() const;
  void validate() const;
};

/// One vector per line, comma or whitespace separated; '#' starts a comment;
/// an optional "sizes" line gives the group profile.
ExplicitSet parse_explicit_set(std::string_view text);
std::string serialize_explicit_set(const ExplicitSet& set);

/// MILP view of the set: one selection binary per candidate, sum = 1, and
/// u_i = sum_c candidate[c][i] * select_c, shifted so model utilities are >= 0.
AllocationInstance to_instance(const ExplicitSet& set, std::string name = "explicit");

struct OracleOutcome {
  SocialOutcome outcome;
  /// Set when tied optimal candidates at some stage would fix different
  /// (index, value) pairs or assemble different final vectors, i.e. the
  /// sequential result depends on which optimum a solver returns.
  bool ambiguous = false;
  std::string ambiguity;
};

/// The sequential procedure executed by scanning candidates: stage k keeps
/// candidates that match the fixed prefix and satisfy u_i >= last fixed
/// value, scores them with G1 / Gbar_k and applies the tie-break.
OracleOutcome enumerate_optimal(const ExplicitSet& set, double delta, const TieBreak& tieBreak,
                                FinalAssembly assembly = FinalAssembly::TerminalSolve);

/// A candidate whose sorted vector is lexicographically maximal (first one on ties).
UtilityVector leximax_oracle(const ExplicitSet& set);

/// max_c sum_i s_i candidate[c][i].
double utilitarian_optimum(const ExplicitSet& set);

/// Deliberate defects for the negative control of the validation harness.
enum class Fault { None, BranchFormFk };

struct CmViolation {
  std::vector<double> before;
  std::vector<double> after;
  TransferSpec spec;
  double delta = 0.0;
  int k = 0;
  double valueBefore = 0.0;
  double valueAfter = 0.0;
};

struct CmReport {
  long trials = 0;
  long checks = 0;
  long skipped = 0;
  std::vector<CmViolation> violations;

  bool passed() const { return violations.empty(); }
  std::string text() const;
};

/// Random sorted u (n in 3..8), random valid transfer with amount equal to a
/// tenth of the smallest positive adjacent gap, F1 and F_k for k <= kMax
/// (kMax <= 0 means every k) must not drop by more than 1e-9.
CmReport check_cm_property(int kMax, long trials, std::uint64_t seed, Fault fault = Fault::None);

struct FidelityCase {
  int instance = 0;
  bool grouped = false;
  int n = 0;
  int k = 1;
  double delta = 0.0;
  double bigM = 0.0;
  double formula = 0.0;
  double milp = 0.0;
  double milpCuts = 0.0;  // k >= 2 only
  double lp = 0.0;
  double lpCuts = 0.0;    // k >= 2 only
  std::string status;
};

struct FidelityReport {
  std::vector<FidelityCase> cases;
  double maxError = 0.0;      // |milp - formula|
  double maxCutShift = 0.0;   // |milpCuts - milp|
  double maxLpLoosen = 0.0;   // max(lpCuts - lp, 0)
  double maxCutSlack = 0.0;   // worst cut violation at (u, formula value)
  int failures = 0;
  double seconds = 0.0;

  bool passed(double tol = 1e-6) const;
  std::string text() const;
  std::string csv() const;
};

/// Pinned-u encoding fidelity and cut safety. Each instance draws n in 2..6,
/// integer u in [0, 20] and delta in [0, range], and is checked with unit
/// groups and with a random group profile, at stage 1 and every k.
FidelityReport check_encoding_fidelity(long instances, std::uint64_t seed,
                                       const SolverConfig& cfg, Fault fault = Fault::None);

struct EquivalenceReport {
  long instances = 0;
  long unambiguous = 0;
  long ambiguous = 0;
  long mismatches = 0;
  long regimeChecks = 0;
  long regimeFailures = 0;
  std::vector<std::string> failures;
  double seconds = 0.0;

  bool passed() const { return mismatches == 0 && regimeFailures == 0; }
  std::string text() const;
};

/// Draws random explicit sets (1..8 candidates, n in 2..6, integer utilities)
/// until `target` unambiguous instances have been compared exactly with the
/// MILP path. Ambiguous draws are checked for membership only. Every
/// instance also runs the regime checks: delta = 0 reaches the utilitarian
/// optimum; delta >= range gives the leximax candidate (tie-break off,
/// unambiguous instances).
EquivalenceReport check_oracle_equivalence(long target, std::uint64_t seed, const TieBreak& tieBreak,
                                           const RunOptions& options);

struct GapRow {
  int trial = 0;
  int n = 0;
  int stage = 1;
  bool pinned = false;
  double milp = 0.0;
  double lp = 0.0;
  double lpCuts = 0.0;  // NaN at stage 1
};

struct GapReport {
  std::vector<GapRow> rows;
  std::string text() const;
  std::string csv() const;
};

/// Diagnostic only: LP relaxation versus MILP optimum of the stage-1 and
/// stage-2 models on random boxed instances, with and without cuts, plus
/// the stage-1 gap with u pinned.
GapReport relaxation_gap_report(int nMin, int nMax, long trials, std::uint64_t seed,
                                const SolverConfig& cfg);

}  // namespace leximax
