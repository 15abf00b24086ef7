/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace leximax {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };
enum class RowSense { LessEqual, Equal, GreaterEqual };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  VarKind kind = VarKind::Continuous;
};

struct Term {
  int var;
  double coef;
};

struct Row {
  std::string name;
  std::vector<Term> terms;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

struct Objective {
  bool maximize = true;
  std::vector<Term> terms;
};

/// Variable ids by role in the welfare encodings. Entries are -1 (or empty)
/// when the role does not occur in the model. Indexed by party for u; by
/// position in the active index set for v, delta and eps.
struct VarMap {
  std::vector<int> u;
  std::vector<int> v;
  std::vector<int> delta;
  std::vector<int> eps;
  std::vector<int> active;  // party index of each v/delta/eps position
  std::vector<int> extra;   // feasible-set variables, in FeasibleSetSpec order
  int z = -1;
  int w = -1;
  int sigma = -1;
  int stage = 0;  // 1 for P1 models, k for P_k models
};

/// Mixed 0-1 linear program. Builder operations elsewhere take a model by
/// const reference and return a new one.
class LinearModel {
 public:
  int add_variable(std::string name, double lower, double upper,
                   VarKind kind = VarKind::Continuous);
  int add_binary(std::string name) { return add_variable(std::move(name), 0.0, 1.0, VarKind::Binary); }
  void add_row(std::string name, std::vector<Term> terms, RowSense sense, double rhs);
  void replace_row(int index, Row row);
  void set_objective(bool maximize, std::vector<Term> terms);

  /// Replace the bounds of an existing variable.
  void set_bounds(int var, double lower, double upper);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  const Objective& objective() const { return objective_; }
  const Variable& variable(int id) const { return vars_.at(static_cast<std::size_t>(id)); }
  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_binaries() const;

  /// Id of the first variable with this name, or -1.
  int find_variable(const std::string& name) const;

  VarMap& roles() { return roles_; }
  const VarMap& roles() const { return roles_; }

  /// Objective value of a full assignment.
  double objective_value(const std::vector<double>& values) const;
  /// Largest bound or row violation of an assignment, and the offending
  /// row/variable name.
  std::pair<double, std::string> max_violation(const std::vector<double>& values) const;

  /// Throws PreconditionError on undeclared variables, non-finite
  /// coefficients or binaries with bounds outside [0, 1].
  void validate() const;

 private:
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  Objective objective_;
  VarMap roles_;
};

/// A reference inside a FeasibleSetSpec: indices below the party count name
/// utility u_i, larger ones name extra variable (ref - parties).
struct SpecTerm {
  int ref;
  double coef;
};

struct SpecRow {
  std::string name;
  std::vector<SpecTerm> terms;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

/// Resource constraints and utility-defining rows describing the feasible
/// utility set, expressed independently of any welfare encoding.
struct FeasibleSetSpec {
  int parties = 0;
  std::vector<Variable> extraVars;
  std::vector<SpecRow> rows;
  /// Optional per-party utility bounds intersected with the encoding's own.
  std::vector<std::pair<double, double>> utilityBounds;

  int extra_ref(int j) const { return parties + j; }
  /// Throws PreconditionError if a reference is out of range or some utility
  /// is neither defined by a row nor bounded.
  void validate() const;
};

/// Variable bounds implied by the rows, from a few rounds of activity-based
/// propagation. Each derived bound is loosened by a relative 1e-9 so that
/// round-off never cuts off a feasible point.
std::vector<std::pair<double, double>> implied_bounds(const LinearModel& model);

/// Feasible set that pins every utility to the given value.
FeasibleSetSpec pinned_utilities(const std::vector<double>& values);

/// Append the extra variables and rows of spec to model, wiring utility
/// references to model.roles().u.
LinearModel attach_feasible_set(const LinearModel& model, const FeasibleSetSpec& spec);

}  // namespace leximax
