/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "leximax/errors.hpp"
#include "leximax/milp.hpp"
#include "leximax/mps.hpp"
#include "leximax/solver.hpp"
#include "random_models.hpp"

using namespace leximax;

namespace {

// Distinct column names listed between INTORG and INTEND markers.
std::set<std::string> integer_columns(const std::string& mps)
{
  std::set<std::string> cols;
  std::istringstream in(mps);
  std::string line;
  bool inside = false;
  while (std::getline(in, line)) {
    if (line.find("'INTORG'") != std::string::npos) { inside = true; continue; }
    if (line.find("'INTEND'") != std::string::npos) { inside = false; continue; }
    if (inside) {
      std::istringstream fields(line);
      std::string name;
      fields >> name;
      cols.insert(name);
    }
  }
  return cols;
}

LinearModel small_model()
{
  LinearModel m;
  const int x = m.add_variable("x", 0, 4);
  const int b = m.add_binary("pick");
  m.add_row("link", {{x, 1}, {b, -3}}, RowSense::LessEqual, 0);
  m.set_objective(true, {{x, 2}, {b, -1}});
  return m;
}

}  // namespace

TEST_CASE("empty objective still declares the sense")
{
  LinearModel m;
  m.add_variable("x", 0, 1);
  const std::string mps = export_mps(m);
  CHECK(mps.find("OBJSENSE\n    MAX") != std::string::npos);
  CHECK(mps.find("ENDATA") != std::string::npos);
  const LinearModel back = parse_mps(mps);
  CHECK(back.num_vars() == 1);
  CHECK(back.objective().maximize);
}

TEST_CASE("P1 export carries one integer column per party")
{
  TradeoffParams p;
  p.delta = 2;
  p.bigM = 10;
  const std::string mps = export_mps(encode_P1(2, GroupProfile::unit(2), p));
  CHECK(integer_columns(mps).size() == 2);
}

TEST_CASE("names are shortened without collisions")
{
  LinearModel m;
  m.add_variable("a_very_long_name_1", 0, 1);
  m.add_variable("a_very_long_name_2", 0, 1);
  m.add_variable("OBJ", 0, 1);
  m.add_variable("with space", 0, 1);
  const MpsNames names = mps_names(m);
  std::set<std::string> unique(names.columns.begin(), names.columns.end());
  CHECK(unique.size() == 4);
  for (const std::string& n : names.columns) {
    CHECK(n.size() <= 8);
    CHECK(n != "OBJ");
    CHECK(n.find(' ') == std::string::npos);
  }
}

TEST_CASE("round trip preserves solve results")
{
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    CAPTURE(trial);
    const LinearModel m = test::random_milp(rng, std::uniform_int_distribution<int>(0, 6)(rng), 3, 4);
    const LinearModel back = parse_mps(export_mps(m));
    REQUIRE(back.num_vars() == m.num_vars());
    REQUIRE(back.num_rows() == m.num_rows());
    CHECK(back.num_binaries() == m.num_binaries());
    CHECK(back.objective().maximize == m.objective().maximize);
    const Solution a = solve(m, {});
    const Solution b = solve(back, {});
    CHECK(a.status == b.status);
    if (a.optimal() && b.optimal()) { CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9)); }
  }
}

TEST_CASE("listing round trip")
{
  const LinearModel m = small_model();
  const Solution s = solve(m, {});
  REQUIRE(s.optimal());
  const Solution back = import_solution(write_solution(m, s), m);
  REQUIRE(back.optimal());
  CHECK(back.objective == doctest::Approx(s.objective).epsilon(1e-9));
  CHECK(back.objective == doctest::Approx(5));

  // Model names are accepted too, comments ignored.
  const Solution named = import_solution("# from elsewhere\nx 3\npick 1\n", m);
  CHECK(named.objective == doctest::Approx(5));

  CHECK(import_solution("# status: infeasible\n", m).status == SolveStatus::Infeasible);
}

TEST_CASE("listing errors")
{
  const LinearModel m = small_model();
  try {
    import_solution("x 3.01\npick 1\n", m);
    FAIL("expected violation");
  } catch (const SolverError& e) {
    CHECK(std::string(e.what()).find("link") != std::string::npos);
  }
  try {
    import_solution("x 0.01\npick 0\n", m);
    FAIL("expected violation");
  } catch (const SolverError& e) {
    CHECK(std::string(e.what()).find("link") != std::string::npos);
  }
  try {
    import_solution("x 1\n", m);
    FAIL("expected missing variable");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("missing variable") != std::string::npos);
  }
  CHECK_THROWS_AS(import_solution("x 1\npick 0.5\n", m), SolverError);
  CHECK_THROWS_AS(import_solution("x one\npick 1\n", m), ParseError);
}

TEST_CASE("parser rejects what it does not support")
{
  CHECK_THROWS_AS(parse_mps("NAME X\nROWS\n N OBJ\nRANGES\nENDATA\n"), ParseError);
  CHECK_THROWS_AS(parse_mps("NAME X\nROWS\n N OBJ\n"), ParseError);
  CHECK_THROWS_AS(parse_mps("NAME X\nROWS\n Q OBJ\nENDATA\n"), ParseError);
  const std::string freeFormat =
      "NAME T\nOBJSENSE\n MIN\nROWS\n N OBJ\n G c1\nCOLUMNS\n x OBJ 1 c1 1\nRHS\n RHS c1 2.5\n"
      "BOUNDS\n UP BND x 10\nENDATA\n";
  const LinearModel m = parse_mps(freeFormat);
  const Solution s = solve(m, {});
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(2.5));
}
