/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <chrono>
#include <optional>
#include <utility>
#include <vector>

#include "leximax/model.hpp"

namespace leximax {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, TimeLimit, NumericalError };

const char* to_string(LpStatus status);

struct LpOptions {
  double primalTol = 1e-9;
  double dualTol = 1e-9;
  double pivotTol = 1e-9;
  long iterationLimit = 0;  // 0 picks a limit from the problem size
  int refactorEvery = 64;
  int blandAfter = 50;  // consecutive degenerate pivots before switching rules
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Bounded-variable revised simplex over the continuous relaxation of a
/// LinearModel, with an explicit dense basis inverse.
///
/// Every row r gets an activity variable s_r = a_r x whose bounds encode the
/// row sense, so the system is A x - s = 0 and all constraints are bounds.
/// After bound changes the previous basis stays dual feasible and resolve()
/// runs the dual simplex from it.
class SimplexLp {
 public:
  explicit SimplexLp(const LinearModel& model, LpOptions options = {});

  int num_structural() const { return n_; }
  int num_rows() const { return m_; }

  void set_bounds(int var, double lower, double upper);
  std::pair<double, double> bounds(int var) const { return {lo_[var], hi_[var]}; }

  /// Two-phase primal simplex from the slack basis.
  LpStatus solve();
  /// Dual simplex from the last optimal basis; falls back to solve() when no
  /// basis is available or the warm path runs into trouble.
  LpStatus resolve();
  /// Recompute the current optimum from a fresh factorisation so basic
  /// values carry no accumulated update error.
  LpStatus refine();

  /// Structural values of the last solve.
  std::vector<double> primal() const;
  /// Objective in the model's sense (a maximum for maximisation models).
  double objective() const;
  long iterations() const { return iterations_; }

 private:
  enum class State : unsigned char { Basic, AtLower, AtUpper, Free };

  double dot_column(const std::vector<double>& vec, int j) const;
  void ftran(int j, std::vector<double>& alpha) const;
  void compute_duals(const std::vector<double>& cost, std::vector<double>& y) const;
  double reduced_cost(const std::vector<double>& cost, const std::vector<double>& y, int j) const;
  void pivot(int row, int entering, const std::vector<double>& alpha);
  bool refactor();
  void recompute_basics();
  double infeasibility(int j) const;
  bool tick();

  LpStatus primal_loop(const std::vector<double>& cost);
  LpStatus dual_loop();
  LpStatus cold_start();
  LpStatus verify(bool fresh);

  int n_ = 0;
  int m_ = 0;
  bool maximize_ = true;
  LpOptions opt_;
  std::vector<std::vector<std::pair<int, double>>> cols_;  // structural columns
  std::vector<double> sign_;                               // artificial column signs
  std::vector<double> cost_;                               // minimisation costs
  std::vector<double> lo_, hi_, x_;
  std::vector<State> state_;
  std::vector<int> head_;
  std::vector<double> binv_;  // row-major m x m
  int sinceRefactor_ = 0;
  long iterations_ = 0;
  long limit_ = 0;
  bool warm_ = false;
  bool timedOut_ = false;
};

}  // namespace leximax
