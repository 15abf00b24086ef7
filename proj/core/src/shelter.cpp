/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "leximax/shelter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "leximax/errors.hpp"

namespace leximax {

void ShelterInstance::validate() const
{
  if (m < 1 || n < 1) { throw PreconditionError("shelter instance needs m >= 1 and n >= 1"); }
  const auto mm = static_cast<std::size_t>(m);
  const auto nn = static_cast<std::size_t>(n);
  if (capacity.size() != mm || openCost.size() != mm || demand.size() != nn || cost.size() != mm * nn) {
    throw PreconditionError("shelter instance dimensions are inconsistent");
  }
  const auto nonneg = [](double v) { return v >= 0.0 && std::isfinite(v); };
  if (!std::all_of(capacity.begin(), capacity.end(), nonneg) ||
      !std::all_of(openCost.begin(), openCost.end(), nonneg) ||
      !std::all_of(cost.begin(), cost.end(), nonneg)) {
    throw PreconditionError("shelter data must be finite and non-negative");
  }
  for (double d : demand) {
    if (!(d > 0.0) || d != std::floor(d)) {
      throw PreconditionError("area populations must be positive integers");
    }
  }
}

ShelterInstance parse_orlib_cap(std::string_view text)
{
  std::istringstream in{std::string(text)};
  std::size_t read = 0;
  const auto next = [&](const char* what) {
    std::string tok;
    if (!(in >> tok)) {
      throw ParseError("truncated file: expected " + std::string(what) + " after " +
                       std::to_string(read) + " tokens");
    }
    ++read;
    return tok;
  };
  const auto number = [&](const char* what) {
    const std::string tok = next(what);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) {
      throw ParseError("token " + std::to_string(read) + ": expected " + what + ", found '" + tok + "'");
    }
    return v;
  };

  ShelterInstance inst;
  const double m = number("location count");
  const double n = number("customer count");
  if (m < 1 || n < 1 || m != std::floor(m) || n != std::floor(n)) {
    throw ParseError("header must be two positive integers 'm n'");
  }
  inst.m = static_cast<int>(m);
  inst.n = static_cast<int>(n);
  for (int j = 0; j < inst.m; ++j) {
    inst.capacity.push_back(number("capacity"));
    inst.openCost.push_back(number("fixed cost"));
  }
  for (int i = 0; i < inst.n; ++i) {
    const double d = number("demand");
    if (d == 0.0) { throw ParseError("customer " + std::to_string(i + 1) + " has zero demand"); }
    inst.demand.push_back(d);
    for (int j = 0; j < inst.m; ++j) { inst.cost.push_back(number("allocation cost")); }
  }
  if (std::string extra; in >> extra) {
    throw ParseError("token count mismatch: unexpected trailing token '" + extra + "'");
  }
  try {
    inst.validate();
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
  return inst;
}

std::string serialize_orlib_cap(const ShelterInstance& instance)
{
  instance.validate();
  const auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << " " << instance.m << " " << instance.n << "\n";
  for (int j = 0; j < instance.m; ++j) {
    out << " " << fmt(instance.capacity[static_cast<std::size_t>(j)]) << " "
        << fmt(instance.openCost[static_cast<std::size_t>(j)]) << "\n";
  }
  for (int i = 0; i < instance.n; ++i) {
    out << " " << fmt(instance.demand[static_cast<std::size_t>(i)]) << "\n";
    for (int j = 0; j < instance.m; ++j) {
      out << " " << fmt(instance.cost[static_cast<std::size_t>(i) * static_cast<std::size_t>(instance.m) +
                                      static_cast<std::size_t>(j)]);
      if ((j + 1) % 7 == 0 || j + 1 == instance.m) { out << "\n"; }
    }
  }
  return out.str();
}

std::string orlib_file_name(const std::string& name)
{
  static const std::map<std::string, std::string> aliases{{"cp92", "cap92"}, {"cp122", "cap122"}};
  const auto it = aliases.find(name);
  return it == aliases.end() ? name : it->second;
}

AllocationInstance build_shelter_model(const ShelterInstance& instance, double budget)
{
  instance.validate();
  if (!(budget >= 0.0) || !std::isfinite(budget)) { throw PreconditionError("budget must be >= 0"); }
  const int m = instance.m;
  const int n = instance.n;

  double maxD = 0.0;
  double minD = kInf;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      maxD = std::max(maxD, instance.distance(i, j));
      minD = std::min(minD, instance.distance(i, j));
    }
  }

  AllocationInstance inst;
  inst.kind = InstanceKind::Shelter;
  inst.name = instance.name;
  std::vector<int> sizes;
  for (double d : instance.demand) { sizes.push_back(static_cast<int>(d)); }
  inst.groups = GroupProfile(std::move(sizes));
  inst.utilityLow = -maxD;
  inst.utilityHigh = -minD;
  inst.offset = maxD;

  FeasibleSetSpec& spec = inst.feasible;
  spec.parties = n;
  const auto x = [&](int i, int j) { return spec.extra_ref(i * m + j); };
  const auto y = [&](int j) { return spec.extra_ref(n * m + j); };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      spec.extraVars.push_back(Variable{"x" + std::to_string(i + 1) + "_" + std::to_string(j + 1), 0.0,
                                        1.0, VarKind::Binary});
    }
  }
  for (int j = 0; j < m; ++j) {
    spec.extraVars.push_back(Variable{"y" + std::to_string(j + 1), 0.0, 1.0, VarKind::Binary});
  }

  for (int i = 0; i < n; ++i) {
    SpecRow assign{"asg" + std::to_string(i + 1), {}, RowSense::Equal, 1.0};
    // Shifted utility: u_i = maxD - sum_j D_ij x_ij.
    SpecRow util{"util" + std::to_string(i + 1), {{i, 1.0}}, RowSense::Equal, maxD};
    for (int j = 0; j < m; ++j) {
      assign.terms.push_back({x(i, j), 1.0});
      util.terms.push_back({x(i, j), instance.distance(i, j)});
    }
    spec.rows.push_back(std::move(assign));
    spec.rows.push_back(std::move(util));
  }
  for (int j = 0; j < m; ++j) {
    SpecRow cap{"cap" + std::to_string(j + 1), {}, RowSense::LessEqual, 0.0};
    for (int i = 0; i < n; ++i) { cap.terms.push_back({x(i, j), instance.demand[static_cast<std::size_t>(i)]}); }
    cap.terms.push_back({y(j), -instance.capacity[static_cast<std::size_t>(j)]});
    spec.rows.push_back(std::move(cap));
  }
  SpecRow open{"budget", {}, RowSense::LessEqual, budget};
  for (int j = 0; j < m; ++j) { open.terms.push_back({y(j), instance.openCost[static_cast<std::size_t>(j)]}); }
  spec.rows.push_back(std::move(open));
  return inst;
}

}  // namespace leximax
