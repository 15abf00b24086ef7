/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <cmath>
#include <random>

#include "leximax/errors.hpp"
#include "leximax/milp.hpp"
#include "leximax/mps.hpp"
#include "leximax/oracle.hpp"
#include "leximax/simplex.hpp"
#include "leximax/solver.hpp"
#include "random_models.hpp"

using namespace leximax;

TEST_CASE("trivial models")
{
  LinearModel lp;
  const int x = lp.add_variable("x", 0, kInf);
  lp.add_row("cap", {{x, 1}}, RowSense::LessEqual, 3);
  lp.set_objective(true, {{x, 1}});
  Solution s = solve(lp, {});
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(3));

  LinearModel ip;
  const int a = ip.add_binary("a");
  const int b = ip.add_binary("b");
  ip.add_row("one", {{a, 1}, {b, 1}}, RowSense::LessEqual, 1);
  ip.set_objective(true, {{a, 1}, {b, 1}});
  s = solve(ip, {});
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(1));
  CHECK(s.bestBound >= s.objective - 1e-9);

  LinearModel infeasible;
  const int y = infeasible.add_variable("y", 0, 1);
  infeasible.add_row("big", {{y, 1}}, RowSense::GreaterEqual, 2);
  infeasible.set_objective(true, {{y, 1}});
  CHECK(solve(infeasible, {}).status == SolveStatus::Infeasible);

  LinearModel unbounded;
  const int w = unbounded.add_variable("w", 0, kInf);
  unbounded.set_objective(true, {{w, 1}});
  CHECK(solve(unbounded, {}).status == SolveStatus::Unbounded);
}

TEST_CASE("minimisation and free variables")
{
  LinearModel m;
  const int x = m.add_variable("x", -kInf, kInf);
  const int y = m.add_variable("y", -kInf, kInf);
  m.add_row("r1", {{x, 1}, {y, 1}}, RowSense::GreaterEqual, 2);
  m.add_row("r2", {{x, 1}, {y, -1}}, RowSense::Equal, 1);
  m.set_objective(false, {{x, 2}, {y, 1}});
  const Solution s = solve(m, {});
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(3.5));
  CHECK(s.values[0] == doctest::Approx(1.5));
  CHECK(s.values[1] == doctest::Approx(0.5));
}

TEST_CASE("simplex warm start matches a cold solve")
{
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    CAPTURE(trial);
    LinearModel m = test::random_milp(rng, 0, 6, 5);
    SimplexLp warm(m);
    if (warm.solve() != LpStatus::Optimal) { continue; }
    for (int step = 0; step < 5; ++step) {
      const int var = std::uniform_int_distribution<int>(0, warm.num_structural() - 1)(rng);
      const auto [lo, hi] = warm.bounds(var);
      const double cut = lo + std::uniform_real_distribution<double>(0, 1)(rng) * (hi - lo);
      const bool upper = (step % 2) == 0;
      warm.set_bounds(var, upper ? lo : cut, upper ? cut : hi);
      m.set_bounds(var, upper ? lo : cut, upper ? cut : hi);
      const LpStatus ws = warm.resolve();
      SimplexLp cold(m);
      const LpStatus cs = cold.solve();
      CHECK(ws == cs);
      if (ws == LpStatus::Optimal && cs == LpStatus::Optimal) {
        CHECK(warm.objective() == doctest::Approx(cold.objective()).epsilon(1e-9));
        CHECK(m.max_violation(warm.primal()).first <= 1e-7);
      }
    }
  }
}

TEST_CASE("branch-and-bound matches enumeration")
{
  std::mt19937_64 rng(32);
  SolverConfig cfg;
  cfg.relGap = 1e-10;
  cfg.absGap = 1e-10;
  for (int trial = 0; trial < 100; ++trial) {
    CAPTURE(trial);
    const int binaries = std::uniform_int_distribution<int>(1, 10)(rng);
    const LinearModel m = test::random_milp(rng, binaries, 3, std::uniform_int_distribution<int>(2, 6)(rng));
    const auto [enumStatus, enumBest] = test::enumerate_binaries(m);
    const Solution s = solve(m, cfg);
    CHECK(s.status == enumStatus);
    if (s.optimal()) {
      CHECK(s.objective == doctest::Approx(enumBest).epsilon(1e-6));
      CHECK(m.max_violation(s.values).first <= 1e-6);
      CHECK((m.objective().maximize ? s.bestBound - s.objective : s.objective - s.bestBound) >= -1e-6);
      for (int j = 0; j < m.num_vars(); ++j) {
        if (m.variable(j).kind == VarKind::Binary) {
          CHECK(s.values[static_cast<std::size_t>(j)] == std::round(s.values[static_cast<std::size_t>(j)]));
        }
      }
    }
  }
}

TEST_CASE("node relaxations are bounded by the root and the incumbent never exceeds them")
{
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    CAPTURE(trial);
    const LinearModel m = test::random_milp(rng, 10, 2, 5);
    std::vector<NodeInfo> nodes;
    SolverConfig cfg;
    cfg.onNode = [&](const NodeInfo& n) { nodes.push_back(n); };
    const Solution s = solve(m, cfg);
    if (!s.optimal() || nodes.empty()) { continue; }
    // Compare in maximisation terms.
    const double sign = m.objective().maximize ? 1.0 : -1.0;
    const double root = sign * nodes.front().lpObjective;
    CHECK(nodes.front().depth == 0);
    CHECK(root >= sign * s.objective - 1e-6);
    for (const NodeInfo& n : nodes) {
      if (!n.feasible) { continue; }
      CHECK(sign * n.lpObjective <= root + 1e-6);
      if (n.hasIncumbent) { CHECK(sign * n.incumbent <= root + 1e-6); }
    }
    CHECK(sign * s.bestBound >= sign * s.objective - 1e-9);
  }
}

TEST_CASE("solves are deterministic")
{
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const LinearModel m = test::random_milp(rng, 8, 3, 5);
    const Solution a = solve(m, {});
    const Solution b = solve(m, {});
    CHECK(a.status == b.status);
    if (a.optimal()) {
      CHECK(a.objective == b.objective);
      CHECK(a.values == b.values);
    }
  }
}

TEST_CASE("worked example P1 selects the third vector")
{
  ExplicitSet set;
  set.candidates = {UtilityVector{1, 2, 8, 9}, UtilityVector{2, 3, 7, 8}, UtilityVector{1, 2, 3, 12}};
  const AllocationInstance inst = to_instance(set);
  TradeoffParams p;
  p.delta = 5;
  p.bigM = compute_big_m(inst, p);
  const LinearModel m = attach_feasible_set(encode_P1(4, inst.groups, p), inst.feasible);
  const Solution s = solve(m, {});
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(25));
  CHECK(s.values[static_cast<std::size_t>(m.find_variable("sel3"))] == 1.0);
}

TEST_CASE("limits")
{
  std::mt19937_64 rng(35);
  const LinearModel m = test::random_milp(rng, 12, 0, 4);
  SolverConfig cfg;
  cfg.nodeLimit = 1;
  const Solution s = solve(m, cfg);
  CHECK((s.status == SolveStatus::GapLimit || s.status == SolveStatus::Optimal ||
         s.status == SolveStatus::Infeasible));
  CHECK(s.status != SolveStatus::NumericalError);

  SolverConfig bad;
  bad.relGap = -1;
  CHECK_THROWS_AS(solve(m, bad), PreconditionError);
}

TEST_CASE("backend selection")
{
  CHECK(make_backend("embedded"));
  CHECK(make_backend(""));
  CHECK_THROWS_AS(make_backend("cplex"), PreconditionError);
  CHECK_THROWS_AS(make_backend("external:"), PreconditionError);
  const Backend failing = make_backend("external:false");
  LinearModel m;
  const int x = m.add_variable("x", 0, 1);
  m.set_objective(true, {{x, 1}});
  CHECK_THROWS_AS(failing(m, {}), SolverError);
}

TEST_CASE("a feasible start becomes the first incumbent")
{
  std::mt19937_64 rng(35);
  int used = 0;
  for (int trial = 0; trial < 40; ++trial) {
    CAPTURE(trial);
    const LinearModel m = test::random_milp(rng, 8, 2, 4);
    const Solution ref = solve(m, {});
    if (!ref.optimal()) { continue; }
    SolverConfig cfg;
    cfg.start = ref.values;
    cfg.nodeLimit = 1;
    const Solution s = solve(m, cfg);
    // One node is not always enough to prove optimality, but the start is
    // never lost.
    REQUIRE(!s.values.empty());
    CHECK(s.objective == doctest::Approx(ref.objective).epsilon(1e-9));
    ++used;
  }
  CHECK(used > 10);
}

TEST_CASE("an unusable start is ignored")
{
  LinearModel m;
  const int a = m.add_binary("a");
  const int b = m.add_binary("b");
  m.add_row("one", {{a, 1.0}, {b, 1.0}}, RowSense::LessEqual, 1.0);
  m.set_objective(true, {{a, 2.0}, {b, 3.0}});
  for (const std::vector<double>& start : {std::vector<double>{1, 1}, std::vector<double>{0.5, 0},
                                           std::vector<double>{1}}) {
    SolverConfig cfg;
    cfg.start = start;
    const Solution s = solve(m, cfg);
    REQUIRE(s.optimal());
    CHECK(s.objective == 3.0);
  }
}

TEST_CASE("branching on feasible-set binaries first matches enumeration")
{
  std::mt19937_64 rng(36);
  SolverConfig cfg;
  cfg.relGap = 1e-10;
  cfg.absGap = 1e-10;
  cfg.branchExtraFirst = true;
  for (int trial = 0; trial < 60; ++trial) {
    CAPTURE(trial);
    LinearModel m = test::random_milp(rng, 8, 2, std::uniform_int_distribution<int>(2, 6)(rng));
    for (int j = 0; j < 8; j += 2) { m.roles().extra.push_back(j); }
    const auto [enumStatus, enumBest] = test::enumerate_binaries(m);
    const Solution s = solve(m, cfg);
    CHECK(s.status == enumStatus);
    if (s.optimal()) { CHECK(s.objective == doctest::Approx(enumBest).epsilon(1e-6)); }
  }
}

TEST_CASE("phase one accepts residuals at the primal tolerance")
{
  // A stage model whose rhs carries 1e-8 noise. Phase one used to finish
  // with artificials of that size and report the LP infeasible.
  const LinearModel m = parse_mps(R"(NAME          LEXIMAX
OBJSENSE
    MAX
ROWS
 N  OBJ
 L  zcap
 L  vm2
 L  vh2
 L  sigfair
 L  sigw
 L  wmin2
 L  wsel2
 L  urng2
 E  onemin
 G  wfloor
 E  fix3
 E  fix1
 E  pick
 E  def1
 E  def2
 E  def3
COLUMNS
    z         OBJ       1
    z         zcap      1
    u1        fix1      1
    u1        def1      1
    u2        vh2       -1
    u2        wmin2     -1
    u2        wsel2     1
    u2        urng2     1
    u2        def2      1
    u3        fix3      1
    u3        def3      1
    sig       zcap      -1
    sig       sigfair   1
    sig       sigw      1
    w         sigw      -1
    w         wmin2     1
    w         wsel2     -1
    w         wfloor    1
    v2        zcap      -1
    v2        vm2       1
    v2        vh2       1
    MARKER00  'MARKER'                 'INTORG'
    d2        vm2       -8.000000012
    e2        onemin    1
    sel1      pick      1
    sel1      def1      -7
    sel1      def2      -9
    sel1      def3      -7
    sel2      pick      1
    sel2      def1      -3
    sel2      def2      -6
    sel2      def3      -1e+01
    sel3      pick      1
    sel3      def1      -1
    sel3      def2      -4
    sel3      def3      -8
    sel4      pick      1
    sel4      def1      -12
    sel4      def2      -12
    sel4      def3      -2
    MARKER01  'MARKER'                 'INTEND'
RHS
    RHS       vh2       -4
    RHS       sigfair   4
    RHS       wsel2     1.2e-08
    RHS       urng2     14.011
    RHS       onemin    1
    RHS       wfloor    12
    RHS       fix3      2
    RHS       fix1      12
    RHS       pick      1
BOUNDS
 FR BND       z
 FR BND       sig
 FR BND       w
 UP BND       d2        1
 UP BND       e2        1
 UP BND       sel1      1
 UP BND       sel2      1
 UP BND       sel3      1
 UP BND       sel4      1
ENDATA
)");
  SolverConfig lp;
  lp.relaxIntegrality = true;
  const Solution s = solve(m, lp);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(12.0));
  CHECK(solve(m, {}).status == SolveStatus::Optimal);
}
