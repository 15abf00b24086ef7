/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "leximax/errors.hpp"
#include "leximax/healthcare.hpp"
#include "leximax/sequential.hpp"
#include "leximax/shelter.hpp"

using namespace leximax;

namespace {

std::string read(const std::string& name)
{
  std::ifstream in(std::string(LEXIMAX_DATA_DIR) + "/" + name);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ShelterInstance random_shelter(std::mt19937_64& rng, int m, int n)
{
  ShelterInstance sh;
  sh.m = m;
  sh.n = n;
  std::uniform_int_distribution<int> dem(1, 50);
  std::uniform_int_distribution<int> cost(1, 900);
  for (int j = 0; j < m; ++j) {
    sh.capacity.push_back(std::uniform_int_distribution<int>(50, 200)(rng));
    sh.openCost.push_back(std::uniform_int_distribution<int>(0, 10000)(rng));
  }
  for (int i = 0; i < n; ++i) {
    sh.demand.push_back(dem(rng));
    for (int j = 0; j < m; ++j) { sh.cost.push_back(cost(rng) + 0.25 * (j % 4)); }
  }
  return sh;
}

}  // namespace

TEST_CASE("healthcare CSV")
{
  const HealthcareInstance two = parse_healthcare_csv("group,s,c,q,alpha\nA,3,2.5,1,4\nB,1,1,0.5,6\n");
  REQUIRE(two.groups.size() == 2);
  CHECK(two.groups[0].name == "A");
  CHECK(two.groups[0].s == 3);
  CHECK(two.groups[1].alpha == 6);
  CHECK_FALSE(two.budget);

  const HealthcareInstance shuffled = parse_healthcare_csv("B=10\nalpha,q,c,s,group\n4,1,2.5,3,A\n");
  CHECK(shuffled.groups[0].c == 2.5);
  CHECK(shuffled.budget == 10);

  try {
    parse_healthcare_csv("group,s,c,q,alpha\nA,1,1,1,1\nB,1,-1,1,1\n");
    FAIL("negative cost accepted");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("'c'") != std::string::npos);
  }
  CHECK_NOTHROW(parse_healthcare_csv("group,s,c,q,alpha\nA,1,1,-2,5\n"));
  CHECK_THROWS_AS(parse_healthcare_csv("group,s,c,alpha\nA,1,1,1\n"), ParseError);
  CHECK_THROWS_AS(parse_healthcare_csv("group,s,c,q,alpha\nA,1,1,1,1\nA,1,1,1,1\n"), ParseError);
  CHECK_THROWS_AS(parse_healthcare_csv("group,s,c,q,alpha\nA,1.5,1,1,1\n"), ParseError);
  CHECK_THROWS_AS(parse_healthcare_csv("group,s,c,q,alpha\nA,1,x,1,1\n"), ParseError);
  CHECK_THROWS_AS(parse_healthcare_csv("A,1,1,1,1\n"), ParseError);
}

TEST_CASE("healthcare round trip")
{
  const HealthcareInstance hw = parse_healthcare_csv(read("healthcare_synthetic.csv"));
  CHECK(hw.groups.size() == 5);
  CHECK(hw.budget == 60);
  const HealthcareInstance back = parse_healthcare_csv(serialize_healthcare_csv(hw));
  REQUIRE(back.groups.size() == hw.groups.size());
  for (std::size_t i = 0; i < hw.groups.size(); ++i) {
    CHECK(back.groups[i].name == hw.groups[i].name);
    CHECK(back.groups[i].s == hw.groups[i].s);
    CHECK(back.groups[i].c == hw.groups[i].c);
    CHECK(back.groups[i].q == hw.groups[i].q);
    CHECK(back.groups[i].alpha == hw.groups[i].alpha);
  }
  CHECK(back.budget == hw.budget);
}

TEST_CASE("healthcare model")
{
  HealthcareInstance hw;
  hw.groups = {{"a", 2, 3.0, 1.5, 4.0}, {"b", 1, 5.0, 2.0, 3.0}, {"c", 4, 1.0, 0.5, 6.0}};
  TradeoffParams p;

  hw.budget = 0.0;
  SocialOutcome none = run_sequence(build_healthcare_model(hw), p);
  CHECK(none.utilities == std::vector<double>{4, 3, 6});

  hw.budget = 2 * 3.0 + 5.0 + 4 * 1.0;
  SocialOutcome all = run_sequence(build_healthcare_model(hw), p);
  CHECK(all.utilities == std::vector<double>{5.5, 5, 6.5});

  CHECK_THROWS_AS(build_healthcare_model(HealthcareInstance{hw.groups, std::nullopt}), PreconditionError);
  const AllocationInstance explicitBudget = build_healthcare_model(HealthcareInstance{hw.groups, std::nullopt}, 1.0);
  CHECK(explicitBudget.parties() == 3);
  CHECK(explicitBudget.groups == GroupProfile{2, 1, 4});
}

TEST_CASE("healthcare outcomes stay on the treatment lattice")
{
  const HealthcareInstance hw = parse_healthcare_csv(read("healthcare_synthetic.csv"));
  const AllocationInstance inst = build_healthcare_model(hw);
  for (double d : {0.0, 1.0, 2.5, 4.0, 20.0}) {
    TradeoffParams p;
    p.delta = d;
    const SocialOutcome out = run_sequence(inst, p);
    double spent = 0.0;
    for (std::size_t i = 0; i < hw.groups.size(); ++i) {
      const HealthcareGroup& g = hw.groups[i];
      const double u = out.utilities[i];
      CHECK((u == g.alpha || u == g.alpha + g.q));
      if (u == g.alpha + g.q && g.q != 0.0) { spent += g.s * g.c; }
    }
    CHECK(spent <= *hw.budget + 1e-6);
  }
}

TEST_CASE("OR-Library parsing")
{
  std::mt19937_64 rng(61);
  const ShelterInstance cp92 = random_shelter(rng, 25, 50);
  const ShelterInstance parsed = parse_orlib_cap(serialize_orlib_cap(cp92));
  CHECK(parsed.m == 25);
  CHECK(parsed.n == 50);
  CHECK(parsed.capacity == cp92.capacity);
  CHECK(parsed.openCost == cp92.openCost);
  CHECK(parsed.demand == cp92.demand);
  CHECK(parsed.cost == cp92.cost);
  CHECK(parse_orlib_cap(serialize_orlib_cap(random_shelter(rng, 50, 50))).m == 50);

  const ShelterInstance one = parse_orlib_cap("1 1\n10 7\n100\n500\n");
  CHECK(one.distance(0, 0) == 5);

  CHECK_THROWS_AS(parse_orlib_cap("2 1\n10 7\n"), ParseError);
  CHECK_THROWS_AS(parse_orlib_cap("1 1\n10 7\n0\n500\n"), ParseError);
  CHECK_THROWS_AS(parse_orlib_cap("1 1\n10 7\n100\n500 9\n"), ParseError);
  CHECK_THROWS_AS(parse_orlib_cap("x 1\n"), ParseError);

  CHECK(orlib_file_name("cp92") == "cap92");
  CHECK(orlib_file_name("cp122") == "cap122");
  CHECK(orlib_file_name("capa") == "capa");
}

TEST_CASE("single shelter forces every assignment")
{
  const ShelterInstance sh = parse_orlib_cap("1 3\n100 50\n10 40\n20 60\n5 5\n");
  const AllocationInstance inst = build_shelter_model(sh, 50);
  CHECK(inst.kind == InstanceKind::Shelter);
  const SocialOutcome out = run_sequence(inst, TradeoffParams{});
  CHECK(out.utilities == std::vector<double>{-4, -3, -1});
  CHECK(out.average == doctest::Approx((10 * -4.0 + 20 * -3.0 + 5 * -1.0) / 35));
  CHECK_THROWS_AS(run_sequence(build_shelter_model(sh, 10), TradeoffParams{}), InfeasibleError);
}

TEST_CASE("shelter outcomes respect the constraint set")
{
  const ShelterInstance sh = parse_orlib_cap(read("shelter_small.txt"));
  double previous = kInf;
  for (double budget : {300.0, 200.0}) {
    const AllocationInstance inst = build_shelter_model(sh, budget);
    for (double d : {0.0, 1.0, 10.0}) {
      TradeoffParams p;
      p.delta = d;
      const SocialOutcome out = run_sequence(inst, p);
      for (int i = 0; i < sh.n; ++i) {
        // Each utility is minus the distance to some shelter.
        bool matched = false;
        for (int j = 0; j < sh.m; ++j) { matched = matched || std::abs(out.utilities[static_cast<std::size_t>(i)] + sh.distance(i, j)) <= 1e-6; }
        CHECK(matched);
      }
      double weighted = 0.0, people = 0.0;
      for (int i = 0; i < sh.n; ++i) {
        weighted += sh.demand[static_cast<std::size_t>(i)] * out.utilities[static_cast<std::size_t>(i)];
        people += sh.demand[static_cast<std::size_t>(i)];
      }
      CHECK(out.average == doctest::Approx(weighted / people));
      if (d == 0.0) {
        // Tighter budgets nest the feasible sets.
        CHECK(out.total <= previous + 1e-6);
        previous = out.total;
      }
    }
  }
  // One shelter cannot hold everyone.
  CHECK_THROWS_AS(run_sequence(build_shelter_model(sh, 100), TradeoffParams{}), InfeasibleError);
}

TEST_CASE("shelter round trip")
{
  std::mt19937_64 rng(62);
  for (int t = 0; t < 5; ++t) {
    const ShelterInstance sh = random_shelter(rng, 3 + t, 4 + 2 * t);
    const std::string text = serialize_orlib_cap(sh);
    CHECK(serialize_orlib_cap(parse_orlib_cap(text)) == text);
  }
}
