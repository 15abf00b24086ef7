/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <random>
#include <string>
#include <utility>

#include "leximax/model.hpp"
#include "leximax/solver.hpp"

namespace leximax::test {

/// Random mixed 0-1 program: `binaries` binaries, `continuous` variables in
/// [0, 5], `rows` constraints with integer coefficients in [-4, 4]. Mostly
/// <= rows with non-negative right-hand sides, so most draws are feasible.
inline LinearModel random_milp(std::mt19937_64& rng, int binaries, int continuous, int rows)
{
  LinearModel m;
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> rhs(0, 8);
  for (int j = 0; j < binaries; ++j) { m.add_binary("b" + std::to_string(j)); }
  for (int j = 0; j < continuous; ++j) { m.add_variable("x" + std::to_string(j), 0.0, 5.0); }
  const int n = m.num_vars();
  for (int r = 0; r < rows; ++r) {
    std::vector<Term> terms;
    for (int j = 0; j < n; ++j) {
      if (const int c = coef(rng); c != 0) { terms.push_back({j, static_cast<double>(c)}); }
    }
    const int kind = std::uniform_int_distribution<int>(0, 9)(rng);
    const RowSense sense = kind == 0 ? RowSense::GreaterEqual : kind == 1 ? RowSense::Equal : RowSense::LessEqual;
    m.add_row("r" + std::to_string(r), std::move(terms), sense, static_cast<double>(rhs(rng)));
  }
  std::vector<Term> obj;
  for (int j = 0; j < n; ++j) { obj.push_back({j, static_cast<double>(coef(rng))}); }
  m.set_objective(std::uniform_int_distribution<int>(0, 1)(rng) == 1, std::move(obj));
  return m;
}

/// Best objective over every binary assignment, each completed by an LP.
inline std::pair<SolveStatus, double> enumerate_binaries(const LinearModel& model)
{
  std::vector<int> bins;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.variable(j).kind == VarKind::Binary) { bins.push_back(j); }
  }
  SolverConfig lp;
  lp.relaxIntegrality = true;
  bool found = false;
  double best = 0.0;
  for (unsigned long mask = 0; mask < (1UL << bins.size()); ++mask) {
    LinearModel fixed = model;
    for (std::size_t b = 0; b < bins.size(); ++b) {
      const double v = (mask >> b) & 1UL ? 1.0 : 0.0;
      fixed.set_bounds(bins[b], v, v);
    }
    const Solution s = solve(fixed, lp);
    if (s.status == SolveStatus::Unbounded) { return {SolveStatus::Unbounded, 0.0}; }
    if (s.status != SolveStatus::Optimal) { continue; }
    const bool better = model.objective().maximize ? s.objective > best : s.objective < best;
    if (!found || better) { best = s.objective; }
    found = true;
  }
  return {found ? SolveStatus::Optimal : SolveStatus::Infeasible, best};
}

}  // namespace leximax::test
