/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "leximax/model.hpp"

#include <algorithm>
#include <cmath>

#include "leximax/errors.hpp"

namespace leximax {

int LinearModel::add_variable(std::string name, double lower, double upper, VarKind kind)
{
  vars_.push_back(Variable{std::move(name), lower, upper, kind});
  return static_cast<int>(vars_.size()) - 1;
}

void LinearModel::add_row(std::string name, std::vector<Term> terms, RowSense sense, double rhs)
{
  rows_.push_back(Row{std::move(name), std::move(terms), sense, rhs});
}

void LinearModel::replace_row(int index, Row row)
{
  rows_.at(static_cast<std::size_t>(index)) = std::move(row);
}

void LinearModel::set_objective(bool maximize, std::vector<Term> terms)
{
  objective_ = Objective{maximize, std::move(terms)};
}

void LinearModel::set_bounds(int var, double lower, double upper)
{
  Variable& v = vars_.at(static_cast<std::size_t>(var));
  v.lower = lower;
  v.upper = upper;
}

int LinearModel::num_binaries() const
{
  return static_cast<int>(std::count_if(vars_.begin(), vars_.end(),
                                        [](const Variable& v) { return v.kind == VarKind::Binary; }));
}

int LinearModel::find_variable(const std::string& name) const
{
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    if (vars_[j].name == name) { return static_cast<int>(j); }
  }
  return -1;
}

double LinearModel::objective_value(const std::vector<double>& values) const
{
  double obj = 0.0;
  for (const Term& t : objective_.terms) { obj += t.coef * values.at(static_cast<std::size_t>(t.var)); }
  return obj;
}

std::pair<double, std::string> LinearModel::max_violation(const std::vector<double>& values) const
{
  double worst = 0.0;
  std::string where;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    const double x = values.at(j);
    const double viol = std::max(vars_[j].lower - x, x - vars_[j].upper);
    if (viol > worst) {
      worst = viol;
      where = "bound of " + vars_[j].name;
    }
  }
  for (const Row& row : rows_) {
    double lhs = 0.0;
    for (const Term& t : row.terms) { lhs += t.coef * values.at(static_cast<std::size_t>(t.var)); }
    double viol = 0.0;
    switch (row.sense) {
      case RowSense::LessEqual: viol = lhs - row.rhs; break;
      case RowSense::GreaterEqual: viol = row.rhs - lhs; break;
      case RowSense::Equal: viol = std::abs(lhs - row.rhs); break;
    }
    if (viol > worst) {
      worst = viol;
      where = row.name;
    }
  }
  return {worst, where};
}

void LinearModel::validate() const
{
  const int n = num_vars();
  auto check_terms = [&](const std::vector<Term>& terms, const std::string& owner) {
    for (const Term& t : terms) {
      if (t.var < 0 || t.var >= n) {
        throw PreconditionError(owner + " references undeclared variable " + std::to_string(t.var));
      }
      if (!std::isfinite(t.coef)) { throw PreconditionError(owner + " has a non-finite coefficient"); }
    }
  };
  for (const Variable& v : vars_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      throw PreconditionError("variable " + v.name + " has invalid bounds");
    }
    if (v.kind == VarKind::Binary && (v.lower < 0.0 || v.upper > 1.0)) {
      throw PreconditionError("binary variable " + v.name + " has bounds outside [0, 1]");
    }
  }
  for (const Row& row : rows_) {
    check_terms(row.terms, "row " + row.name);
    if (!std::isfinite(row.rhs)) { throw PreconditionError("row " + row.name + " has a non-finite rhs"); }
  }
  check_terms(objective_.terms, "objective");
}

void FeasibleSetSpec::validate() const
{
  if (parties < 1) { throw PreconditionError("feasible set needs at least one party"); }
  const int limit = parties + static_cast<int>(extraVars.size());
  std::vector<bool> defined(static_cast<std::size_t>(parties), false);
  for (const SpecRow& row : rows) {
    for (const SpecTerm& t : row.terms) {
      if (t.ref < 0 || t.ref >= limit) {
        throw PreconditionError("feasible-set row " + row.name + " has an out-of-range reference");
      }
      if (!std::isfinite(t.coef)) {
        throw PreconditionError("feasible-set row " + row.name + " has a non-finite coefficient");
      }
      if (t.ref < parties && t.coef != 0.0) { defined[static_cast<std::size_t>(t.ref)] = true; }
    }
  }
  if (!utilityBounds.empty()) {
    if (utilityBounds.size() != static_cast<std::size_t>(parties)) {
      throw PreconditionError("utility bounds must cover every party");
    }
    for (int i = 0; i < parties; ++i) {
      const auto [lo, hi] = utilityBounds[static_cast<std::size_t>(i)];
      if (lo > hi) { throw PreconditionError("utility bounds are inverted"); }
      if (std::isfinite(lo) || std::isfinite(hi)) { defined[static_cast<std::size_t>(i)] = true; }
    }
  }
  for (int i = 0; i < parties; ++i) {
    if (!defined[static_cast<std::size_t>(i)]) {
      throw PreconditionError("utility u_" + std::to_string(i + 1) +
                              " is not defined by any row or bound");
    }
  }
}

std::vector<std::pair<double, double>> implied_bounds(const LinearModel& model)
{
  std::vector<std::pair<double, double>> b;
  for (const Variable& v : model.variables()) { b.emplace_back(v.lower, v.upper); }
  const auto slack = [](double x) { return 1e-9 * std::max(1.0, std::abs(x)); };

  // One pass over sum(sign * a_j x_j) <= sign * rhs.
  const auto tighten = [&](const Row& row, double sign) {
    bool changed = false;
    double minAct = 0.0;
    int infinite = 0;
    for (const Term& t : row.terms) {
      const double a = sign * t.coef;
      const auto [lo, hi] = b[static_cast<std::size_t>(t.var)];
      const double m = a > 0.0 ? a * lo : a * hi;
      if (a == 0.0) { continue; }
      if (std::isfinite(m)) {
        minAct += m;
      } else {
        ++infinite;
      }
    }
    if (infinite > 1) { return false; }
    for (const Term& t : row.terms) {
      const double a = sign * t.coef;
      if (a == 0.0) { continue; }
      auto& [lo, hi] = b[static_cast<std::size_t>(t.var)];
      const double own = a > 0.0 ? a * lo : a * hi;
      double rest;
      if (std::isfinite(own)) {
        if (infinite > 0) { continue; }
        rest = minAct - own;
      } else {
        rest = minAct;
      }
      const double limit = (sign * row.rhs - rest) / a;
      if (!std::isfinite(limit) || std::abs(limit) > 1e12) { continue; }
      const bool binary = model.variable(t.var).kind == VarKind::Binary;
      if (a > 0.0) {
        const double nb = binary ? std::floor(limit + 1e-9) : limit + slack(limit);
        if (nb < hi - slack(nb)) {
          hi = nb;
          changed = true;
        }
      } else {
        const double nb = binary ? std::ceil(limit - 1e-9) : limit - slack(limit);
        if (nb > lo + slack(nb)) {
          lo = nb;
          changed = true;
        }
      }
    }
    return changed;
  };

  for (int round = 0; round < 10; ++round) {
    bool changed = false;
    for (const Row& row : model.rows()) {
      if (row.sense != RowSense::GreaterEqual) { changed = tighten(row, 1.0) || changed; }
      if (row.sense != RowSense::LessEqual) { changed = tighten(row, -1.0) || changed; }
    }
    if (!changed) { break; }
  }
  return b;
}

FeasibleSetSpec pinned_utilities(const std::vector<double>& values)
{
  FeasibleSetSpec spec;
  spec.parties = static_cast<int>(values.size());
  for (int i = 0; i < spec.parties; ++i) {
    spec.rows.push_back(SpecRow{"pin_u" + std::to_string(i + 1), {{i, 1.0}}, RowSense::Equal,
                                values[static_cast<std::size_t>(i)]});
  }
  return spec;
}

LinearModel attach_feasible_set(const LinearModel& model, const FeasibleSetSpec& spec)
{
  spec.validate();
  LinearModel out = model;
  const std::vector<int>& u = out.roles().u;
  if (static_cast<int>(u.size()) != spec.parties) {
    throw PreconditionError("feasible set has " + std::to_string(spec.parties) +
                            " parties but the model has " + std::to_string(u.size()));
  }
  std::vector<int> extra;
  extra.reserve(spec.extraVars.size());
  for (const Variable& v : spec.extraVars) {
    extra.push_back(out.add_variable(v.name, v.lower, v.upper, v.kind));
  }
  auto resolve = [&](int ref) {
    return ref < spec.parties ? u[static_cast<std::size_t>(ref)]
                              : extra[static_cast<std::size_t>(ref - spec.parties)];
  };
  for (const SpecRow& row : spec.rows) {
    std::vector<Term> terms;
    terms.reserve(row.terms.size());
    for (const SpecTerm& t : row.terms) { terms.push_back(Term{resolve(t.ref), t.coef}); }
    out.add_row(row.name, std::move(terms), row.sense, row.rhs);
  }
  if (!spec.utilityBounds.empty()) {
    for (int i = 0; i < spec.parties; ++i) {
      const Variable& var = out.variable(u[static_cast<std::size_t>(i)]);
      const auto [lo, hi] = spec.utilityBounds[static_cast<std::size_t>(i)];
      const double newLo = std::max(var.lower, lo);
      const double newHi = std::min(var.upper, hi);
      if (newLo > newHi) {
        throw InfeasibleError("utility bounds of u_" + std::to_string(i + 1) +
                              " conflict with the encoding");
      }
      out.set_bounds(u[static_cast<std::size_t>(i)], newLo, newHi);
    }
  }
  out.roles().extra = std::move(extra);
  return out;
}

}  // namespace leximax
