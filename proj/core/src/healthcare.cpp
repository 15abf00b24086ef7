/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "leximax/healthcare.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_set>

#include "leximax/errors.hpp"

namespace leximax {

namespace {

std::string trim(std::string s)
{
  const auto notSpace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notSpace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notSpace).base(), s.end());
  return s;
}

std::vector<std::string> split_csv(const std::string& line)
{
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) { out.push_back(trim(cell)); }
  if (!line.empty() && line.back() == ',') { out.emplace_back(); }
  return out;
}

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void HealthcareInstance::validate() const
{
  if (groups.empty()) { throw PreconditionError("healthcare instance has no groups"); }
  std::unordered_set<std::string> seen;
  for (const HealthcareGroup& g : groups) {
    if (!seen.insert(g.name).second) { throw PreconditionError("duplicate group " + g.name); }
    if (g.s < 1) { throw PreconditionError("group " + g.name + ": s must be >= 1"); }
    if (!(g.c >= 0.0) || !std::isfinite(g.c)) { throw PreconditionError("group " + g.name + ": c must be >= 0"); }
    if (!(g.alpha >= 0.0) || !std::isfinite(g.alpha)) {
      throw PreconditionError("group " + g.name + ": alpha must be >= 0");
    }
    if (!std::isfinite(g.q)) { throw PreconditionError("group " + g.name + ": q must be finite"); }
  }
  if (budget && (!(*budget >= 0.0) || !std::isfinite(*budget))) {
    throw PreconditionError("budget must be >= 0");
  }
}

HealthcareInstance parse_healthcare_csv(std::string_view text)
{
  constexpr std::array<const char*, 5> kColumns{"group", "s", "c", "q", "alpha"};
  HealthcareInstance inst;
  std::array<int, 5> pos{-1, -1, -1, -1, -1};
  bool haveHeader = false;
  std::unordered_set<std::string> names;

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    std::string line = trim(raw);
    if (line.empty()) { continue; }
    std::string body = line[0] == '#' ? trim(line.substr(1)) : line;
    if (body.size() > 2 && (body[0] == 'B' || body[0] == 'b') && body.find('=') != std::string::npos &&
        trim(body.substr(0, body.find('='))).size() == 1) {
      const std::string value = trim(body.substr(body.find('=') + 1));
      std::size_t used = 0;
      double b = 0.0;
      try {
        b = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != value.size() || value.empty()) {
        throw ParseError("line " + std::to_string(lineNo) + ": bad budget '" + value + "'");
      }
      if (b < 0.0) { throw ParseError("line " + std::to_string(lineNo) + ": negative budget"); }
      inst.budget = b;
      continue;
    }
    if (line[0] == '#') { continue; }

    const std::vector<std::string> cells = split_csv(line);
    if (!haveHeader) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        for (std::size_t k = 0; k < kColumns.size(); ++k) {
          if (cells[c] == kColumns[k]) { pos[k] = static_cast<int>(c); }
        }
      }
      for (std::size_t k = 0; k < kColumns.size(); ++k) {
        if (pos[k] < 0) { throw ParseError(std::string("missing column '") + kColumns[k] + "'"); }
      }
      haveHeader = true;
      continue;
    }

    const std::string where = "line " + std::to_string(lineNo);
    const auto cell = [&](std::size_t k) -> const std::string& {
      const auto p = static_cast<std::size_t>(pos[k]);
      if (p >= cells.size()) {
        throw ParseError(where + ": missing value for column '" + kColumns[k] + "'");
      }
      return cells[p];
    };
    const auto number = [&](std::size_t k) {
      const std::string& s = cell(k);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size() || s.empty() || !std::isfinite(v)) {
        throw ParseError(where + ", column '" + kColumns[k] + "': bad number '" + s + "'");
      }
      if (v < 0.0 && k != 3) {
        throw ParseError(where + ", column '" + kColumns[k] + "': negative value " + s);
      }
      return v;
    };
    HealthcareGroup g;
    g.name = cell(0);
    if (g.name.empty()) { throw ParseError(where + ": empty group name"); }
    if (!names.insert(g.name).second) { throw ParseError(where + ": duplicate group '" + g.name + "'"); }
    const double s = number(1);
    if (s < 1.0 || s != std::floor(s)) {
      throw ParseError(where + ", column 's': group size must be a positive integer");
    }
    g.s = static_cast<int>(s);
    g.c = number(2);
    g.q = number(3);
    g.alpha = number(4);
    inst.groups.push_back(std::move(g));
  }
  if (!haveHeader) { throw ParseError("missing header line 'group,s,c,q,alpha'"); }
  if (inst.groups.empty()) { throw ParseError("no groups"); }
  inst.validate();
  return inst;
}

std::string serialize_healthcare_csv(const HealthcareInstance& instance)
{
  instance.validate();
  std::ostringstream out;
  if (instance.budget) { out << "# B=" << fmt(*instance.budget) << "\n"; }
  out << "group,s,c,q,alpha\n";
  for (const HealthcareGroup& g : instance.groups) {
    out << g.name << "," << g.s << "," << fmt(g.c) << "," << fmt(g.q) << "," << fmt(g.alpha) << "\n";
  }
  return out.str();
}

AllocationInstance build_healthcare_model(const HealthcareInstance& instance, std::optional<double> budget)
{
  instance.validate();
  const std::optional<double> b = budget ? budget : instance.budget;
  if (!b) { throw PreconditionError("healthcare budget not set (use a B= line or --budget)"); }
  if (!(*b >= 0.0)) { throw PreconditionError("budget must be >= 0"); }

  const int n = static_cast<int>(instance.groups.size());
  AllocationInstance inst;
  inst.kind = InstanceKind::Healthcare;
  std::vector<int> sizes;
  double lo = kInf, hi = -kInf;
  for (const HealthcareGroup& g : instance.groups) {
    sizes.push_back(g.s);
    lo = std::min({lo, g.alpha, g.alpha + g.q});
    hi = std::max({hi, g.alpha, g.alpha + g.q});
    inst.partyNames.push_back(g.name);
  }
  inst.groups = GroupProfile(std::move(sizes));
  inst.utilityLow = lo;
  inst.utilityHigh = hi;
  inst.offset = std::max(0.0, -lo);

  FeasibleSetSpec& spec = inst.feasible;
  spec.parties = n;
  SpecRow budgetRow{"budget", {}, RowSense::LessEqual, *b};
  for (int i = 0; i < n; ++i) {
    const HealthcareGroup& g = instance.groups[static_cast<std::size_t>(i)];
    spec.extraVars.push_back(Variable{"y" + std::to_string(i + 1), 0.0, 1.0, VarKind::Binary});
    spec.rows.push_back(SpecRow{"util" + std::to_string(i + 1), {{i, 1.0}, {spec.extra_ref(i), -g.q}},
                                RowSense::Equal, g.alpha + inst.offset});
    const double spend = g.s * g.c;
    if (spend != 0.0) { budgetRow.terms.push_back({spec.extra_ref(i), spend}); }
  }
  spec.rows.push_back(std::move(budgetRow));
  return inst;
}

}  // namespace leximax
