/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <random>

#include "leximax/errors.hpp"
#include "leximax/healthcare.hpp"
#include "leximax/milp.hpp"
#include "leximax/oracle.hpp"
#include "leximax/solver.hpp"
#include "leximax/swf.hpp"

using namespace leximax;

namespace {

TradeoffParams params(double delta, double bigM)
{
  TradeoffParams p;
  p.delta = delta;
  p.bigM = bigM;
  return p;
}

SolverConfig tight()
{
  SolverConfig cfg;
  cfg.relGap = 1e-10;
  return cfg;
}

double solve_z(const LinearModel& m, bool relax = false)
{
  SolverConfig cfg = tight();
  cfg.relaxIntegrality = relax;
  const Solution sol = solve(m, cfg);
  REQUIRE(sol.status == SolveStatus::Optimal);
  return sol.values[static_cast<std::size_t>(m.roles().z)];
}

SequentialState state_with(int n, std::initializer_list<std::pair<int, double>> fixes)
{
  SequentialState st = SequentialState::initial(n);
  for (auto [i, v] : fixes) { st.fix(i, v); }
  return st;
}

}  // namespace

TEST_CASE("P1 structure for two parties")
{
  const LinearModel m = encode_P1(2, GroupProfile::unit(2), params(3, 100));
  CHECK(m.num_vars() == 8);
  CHECK(m.num_rows() == 9);
  CHECK(m.num_binaries() == 2);
  CHECK(m.roles().stage == 1);
  CHECK(m.roles().u.size() == 2);
  CHECK(m.objective().maximize);
}

TEST_CASE("P1 over a box")
{
  FeasibleSetSpec box;
  box.parties = 2;
  box.utilityBounds = {{0, 10}, {0, 10}};
  const LinearModel m = attach_feasible_set(encode_P1(2, GroupProfile::unit(2), params(3, 100)), box);
  SolverConfig cfg = tight();
  const Solution sol = solve(m, cfg);
  REQUIRE(sol.optimal());
  CHECK(sol.objective == doctest::Approx(23));
  CHECK(sol.values[static_cast<std::size_t>(m.roles().u[0])] == doctest::Approx(10));
  CHECK(sol.values[static_cast<std::size_t>(m.roles().u[1])] == doctest::Approx(10));
}

TEST_CASE("pinned utilities reproduce the welfare values")
{
  const auto pinned = pinned_utilities({1, 2, 8, 9});
  const GroupProfile unit = GroupProfile::unit(4);
  CHECK(solve_z(attach_feasible_set(encode_P1(4, unit, params(5, 100)), pinned)) == doctest::Approx(24));

  const LinearModel p2 = encode_Pk(state_with(4, {{0, 1}}), unit, params(5, 100));
  CHECK(p2.roles().stage == 2);
  CHECK(solve_z(attach_feasible_set(p2, pinned)) == doctest::Approx(11));

  const LinearModel p3 = encode_Pk(state_with(4, {{0, 1}, {1, 2}}), unit, params(5, 100));
  CHECK(solve_z(attach_feasible_set(p3, pinned)) == doctest::Approx(17));
}

TEST_CASE("last stage has a single selector")
{
  const LinearModel m = encode_Pk(state_with(3, {{0, 1}, {2, 2}}), GroupProfile::unit(3), params(1, 50));
  CHECK(m.roles().active == std::vector<int>{1});
  CHECK(m.roles().eps.size() == 1);
  const Solution sol = solve(attach_feasible_set(m, pinned_utilities({1, 7, 2})), tight());
  REQUIRE(sol.optimal());
  CHECK(sol.values[static_cast<std::size_t>(m.roles().eps[0])] == doctest::Approx(1));
  CHECK(sol.objective == doctest::Approx(eval_Fbar_k(std::vector<double>{7}, std::vector<double>{1, 2}, 1, 3)));
}

TEST_CASE("encode_Pk rejects stage 1")
{
  CHECK_THROWS_AS(encode_Pk(SequentialState::initial(3), GroupProfile::unit(3), params(1, 10)),
                  PreconditionError);
  TradeoffParams bad = params(5, 4);
  CHECK_THROWS_AS(encode_P1(3, GroupProfile::unit(3), bad), PreconditionError);
}

TEST_CASE("cut multiplier")
{
  CHECK(cut_beta(state_with(4, {{0, 1}}), 5, 100) == doctest::Approx(1 - 5.0 / 100));
  CHECK(cut_beta(state_with(4, {{0, 1}, {1, 3}}), 5, 100) == doctest::Approx(95.0 / 98.0));
}

TEST_CASE("cuts hold at a feasible point")
{
  const SequentialState st = state_with(4, {{0, 1}});
  const GroupProfile unit = GroupProfile::unit(4);
  const TradeoffParams p = params(5, 100);
  const LinearModel base = attach_feasible_set(encode_Pk(st, unit, p), pinned_utilities({1, 2, 8, 9}));
  const LinearModel cut = add_valid_cuts(base, st, unit, p);
  CHECK(cut.num_rows() == base.num_rows() + 3 + 1);
  CHECK(cut.num_vars() == base.num_vars());
  const Solution sol = solve(base, tight());
  REQUIRE(sol.optimal());
  CHECK(sol.objective == doctest::Approx(11));
  CHECK(cut.max_violation(sol.values).first <= 1e-9);
  CHECK(solve_z(cut) == doctest::Approx(11));
}

TEST_CASE("cuts never loosen the LP relaxation")
{
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> nd(3, 6);
  std::uniform_int_distribution<int> ud(0, 12);
  for (int trial = 0; trial < 50; ++trial) {
    CAPTURE(trial);
    const int n = nd(rng);
    FeasibleSetSpec box;
    box.parties = n;
    for (int i = 0; i < n; ++i) {
      const double lo = ud(rng);
      box.utilityBounds.emplace_back(lo, lo + ud(rng));
    }
    // Fix the party with the smallest lower bound at that bound.
    int arg = 0;
    for (int i = 1; i < n; ++i) {
      if (box.utilityBounds[static_cast<std::size_t>(i)].first < box.utilityBounds[static_cast<std::size_t>(arg)].first) { arg = i; }
    }
    const double anchor = box.utilityBounds[static_cast<std::size_t>(arg)].first;
    box.utilityBounds[static_cast<std::size_t>(arg)].second = anchor;
    for (auto& b : box.utilityBounds) { b.first = std::max(b.first, anchor); }

    const SequentialState st = state_with(n, {{arg, anchor}});
    const TradeoffParams p = params(std::uniform_real_distribution<double>(0, 8)(rng), 40);
    const GroupProfile unit = GroupProfile::unit(static_cast<std::size_t>(n));
    const LinearModel base = attach_feasible_set(encode_Pk(st, unit, p), box);
    const LinearModel cut = add_valid_cuts(base, st, unit, p);
    CHECK(solve_z(cut, true) <= solve_z(base, true) + 1e-9);
    CHECK(solve_z(cut) == doctest::Approx(solve_z(base)).epsilon(1e-8));
  }
}

TEST_CASE("tie-break picks the larger total")
{
  ExplicitSet set;
  set.candidates = {UtilityVector{5, 5, 8}, UtilityVector{5, 5, 10}};
  const AllocationInstance inst = to_instance(set);
  TradeoffParams p = params(10, 30);
  const LinearModel m = attach_feasible_set(encode_P1(3, inst.groups, p), inst.feasible);
  const Solution first = solve(m, tight());
  REQUIRE(first.optimal());
  CHECK(first.objective == doctest::Approx(35));

  p.tieBreak = TieBreak::hierarchical();
  const LinearModel h = add_tiebreak(m, first.objective, inst.groups, p);
  const Solution second = solve(h, tight());
  REQUIRE(second.optimal());
  CHECK(second.values[static_cast<std::size_t>(h.roles().u[2])] == doctest::Approx(10));
  CHECK(h.find_variable(m.variable(0).name) == 0);

  p.tieBreak = TieBreak::weighted(0.0);
  const Solution eps0 = solve(add_tiebreak(m, first.objective, inst.groups, p), tight());
  REQUIRE(eps0.optimal());
  CHECK(eps0.objective == doctest::Approx(35));

  p.tieBreak = TieBreak::weighted(1e-3);
  const LinearModel e = add_tiebreak(m, first.objective, inst.groups, p);
  const Solution eps = solve(e, tight());
  REQUIRE(eps.optimal());
  CHECK(eps.values[static_cast<std::size_t>(e.roles().u[2])] == doctest::Approx(10));
}

TEST_CASE("tie-break keeps a unique optimum")
{
  ExplicitSet set;
  set.candidates = {UtilityVector{1, 2, 8, 9}, UtilityVector{2, 3, 7, 8}, UtilityVector{1, 2, 3, 12}};
  const AllocationInstance inst = to_instance(set);
  TradeoffParams p = params(5, 20);
  const LinearModel m = attach_feasible_set(encode_P1(4, inst.groups, p), inst.feasible);
  const Solution a = solve(m, tight());
  REQUIRE(a.optimal());
  const Solution b = solve(add_tiebreak(m, a.objective, inst.groups, p), tight());
  REQUIRE(b.optimal());
  for (int u : m.roles().u) {
    CHECK(b.values[static_cast<std::size_t>(u)] == doctest::Approx(a.values[static_cast<std::size_t>(u)]));
  }
  CHECK(a.values[static_cast<std::size_t>(m.roles().u[3])] == doctest::Approx(12));
}

TEST_CASE("big-M policy")
{
  AllocationInstance inst;
  inst.feasible.parties = 1;
  inst.utilityLow = 0;
  inst.utilityHigh = 10;
  TradeoffParams p;
  p.delta = 3;
  CHECK(compute_big_m(inst, p) == doctest::Approx(11.01));
  inst.utilityHigh = 0;
  p.delta = 5;
  CHECK(compute_big_m(inst, p) == doctest::Approx(6.005));

  HealthcareInstance hw;
  hw.groups = {{"a", 1, 1.0, 2.0, 3.0}, {"b", 1, 1.0, 6.0, 1.5}};
  hw.budget = 1.0;
  const AllocationInstance h = build_healthcare_model(hw);
  CHECK(h.utilityLow == 1.5);
  CHECK(h.utilityHigh == 7.5);
}

TEST_CASE("implied bounds follow a utility row")
{
  LinearModel m;
  const int u = m.add_variable("u", 0.0, kInf);
  const int y = m.add_binary("y");
  const int x = m.add_variable("x", -kInf, kInf);
  m.add_row("def", {{u, 1.0}, {y, -3.0}}, RowSense::Equal, 2.0);
  m.add_row("cap", {{x, 1.0}, {u, -1.0}}, RowSense::LessEqual, 0.0);
  m.add_row("off", {{y, 1.0}}, RowSense::LessEqual, 0.5);
  const auto b = implied_bounds(m);
  CHECK(b[u].first == doctest::Approx(2.0));
  // y <= 0.5 rounds down to 0, which pins u at 2.
  CHECK(b[y].second == 0.0);
  CHECK(b[u].second == doctest::Approx(2.0));
  CHECK(b[x].first == -kInf);
  CHECK(b[x].second == doctest::Approx(2.0));
  CHECK(b[u].first <= 2.0);
  CHECK(b[u].second >= 2.0);
}

TEST_CASE("per-row big-M keeps the optimum and never loosens the relaxation")
{
  // Every allocation keeps its value once the constants shrink.
  const auto same_per_allocation = [](const LinearModel& a, const LinearModel& b) {
    const std::vector<int>& alloc = a.roles().extra;
    for (int mask = 0; mask < (1 << alloc.size()); ++mask) {
      LinearModel fa = a, fb = b;
      for (std::size_t j = 0; j < alloc.size(); ++j) {
        const double bit = (mask >> j) & 1;
        fa.set_bounds(alloc[j], bit, bit);
        fb.set_bounds(alloc[j], bit, bit);
      }
      const Solution sa = solve(fa, tight()), sb = solve(fb, tight());
      CAPTURE(mask);
      REQUIRE(sa.status == sb.status);
      if (sa.status == SolveStatus::Optimal) { CHECK(sb.objective == doctest::Approx(sa.objective).epsilon(1e-8)); }
    }
  };
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<int> nd(3, 6);
  std::uniform_int_distribution<int> small(0, 6);
  for (int trial = 0; trial < 300; ++trial) {
    CAPTURE(trial);
    const int n = nd(rng);
    // Knapsack over "treat party i" binaries, as in the healthcare model.
    HealthcareInstance hc;
    for (int i = 0; i < n; ++i) {
      hc.groups.push_back(HealthcareGroup{"g" + std::to_string(i), 1 + small(rng), 1.0 + small(rng),
                                          1.0 + small(rng), static_cast<double>(small(rng))});
    }
    const AllocationInstance inst = build_healthcare_model(hc, 4.0 + 3 * small(rng));
    const GroupProfile& s = inst.groups;
    TradeoffParams p;
    p.delta = std::uniform_real_distribution<double>(0, 8)(rng);
    p.bigM = compute_big_m(inst, p);

    const LinearModel p1 = attach_feasible_set(encode_P1(n, s, p), inst.feasible);
    const Solution first = solve(p1, tight());
    REQUIRE(first.status == SolveStatus::Optimal);
    const LinearModel p1t = tighten_big_m(p1, SequentialState::initial(n), p);
    CHECK(solve_z(p1t, true) <= solve_z(p1, true) + 1e-9);
    CHECK(solve_z(p1t) == doctest::Approx(solve_z(p1)).epsilon(1e-8));
    same_per_allocation(p1, p1t);
    int arg = 0;
    for (int i = 1; i < n; ++i) {
      if (first.values[p1.roles().u[i]] < first.values[p1.roles().u[arg]]) { arg = i; }
    }
    const SequentialState st = state_with(n, {{arg, snap_to_grid(first.values[p1.roles().u[arg]], 1e-6)}});
    const LinearModel base = attach_feasible_set(encode_Pk(st, s, p), inst.feasible);
    const LinearModel tightened = tighten_big_m(base, st, p);
    CHECK(tightened.num_rows() == base.num_rows());
    CHECK(solve_z(tightened, true) <= solve_z(base, true) + 1e-9);
    CHECK(solve_z(tightened) == doctest::Approx(solve_z(base)).epsilon(1e-8));
    same_per_allocation(base, tightened);
  }
}

TEST_CASE("per-row big-M needs utility bounds")
{
  const TradeoffParams p = params(1.0, 10.0);
  const LinearModel m = encode_P1(3, GroupProfile::unit(3), p);
  const LinearModel t = tighten_big_m(m, SequentialState::initial(3), p);
  for (int r = 0; r < m.num_rows(); ++r) {
    CHECK(t.rows()[r].rhs == m.rows()[r].rhs);
    CHECK(t.rows()[r].terms.size() == m.rows()[r].terms.size());
  }
}
