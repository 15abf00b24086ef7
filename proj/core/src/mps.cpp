/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "leximax/mps.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "leximax/errors.hpp"

namespace leximax {

namespace {

constexpr std::size_t kNameWidth = 8;

std::string sanitize(const std::string& raw)
{
  std::string out;
  for (char c : raw) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
    if (out.size() == kNameWidth) { break; }
  }
  return out.empty() ? std::string("_") : out;
}

std::vector<std::string> unique_names(const std::vector<std::string>& raw,
                                      std::unordered_set<std::string>& taken)
{
  std::vector<std::string> out;
  out.reserve(raw.size());
  for (const std::string& r : raw) {
    std::string name = sanitize(r);
    for (int k = 1; taken.count(name) != 0; ++k) {
      const std::string suffix = std::to_string(k);
      name = sanitize(r).substr(0, kNameWidth - suffix.size()) + suffix;
    }
    taken.insert(name);
    out.push_back(std::move(name));
  }
  return out;
}

/// Shortest representation that fits the 12-character numeric field.
std::string number(double v)
{
  char buf[32];
  for (int precision = 17; precision > 0; --precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::char_traits<char>::length(buf) <= 12) {
      // Prefer the shortest string that still round-trips.
      for (int p = 1; p <= precision; ++p) {
        char shorter[32];
        std::snprintf(shorter, sizeof shorter, "%.*g", p, v);
        if (std::strtod(shorter, nullptr) == std::strtod(buf, nullptr)) { return shorter; }
      }
      return buf;
    }
  }
  throw PreconditionError("value does not fit an MPS field");
}

std::string pad(const std::string& s, std::size_t width)
{
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

// Field layout: columns 2-3, 5-12, 15-22, 25-36, 40-47, 50-61.
std::string line(const std::string& code, const std::string& f1, const std::string& f2 = {},
                 const std::string& n1 = {})
{
  std::string out = " " + pad(code, 2) + " " + pad(f1, 8);
  if (!f2.empty()) { out += "  " + pad(f2, 8) + "  " + n1; }
  while (!out.empty() && out.back() == ' ') { out.pop_back(); }
  return out + "\n";
}

std::vector<std::string> tokens(std::string_view text)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) { out.push_back(std::move(cur)); }
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) { out.push_back(std::move(cur)); }
  return out;
}

double parse_number(const std::string& s, int lineNo)
{
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw ParseError("line " + std::to_string(lineNo) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

MpsNames mps_names(const LinearModel& model)
{
  std::unordered_set<std::string> taken{"OBJ", "RHS", "BND", "MARKER"};
  std::vector<std::string> raw;
  for (const Variable& v : model.variables()) { raw.push_back(v.name); }
  MpsNames names;
  names.columns = unique_names(raw, taken);
  raw.clear();
  std::unordered_set<std::string> rowTaken{"OBJ"};
  for (const Row& r : model.rows()) { raw.push_back(r.name); }
  names.rows = unique_names(raw, rowTaken);
  return names;
}

std::string export_mps(const LinearModel& model, std::string_view name)
{
  model.validate();
  const MpsNames names = mps_names(model);
  const int n = model.num_vars();

  // Column-wise view of the rows and objective.
  std::vector<std::vector<std::pair<std::string, double>>> cols(static_cast<std::size_t>(n));
  for (const Term& t : model.objective().terms) {
    cols[static_cast<std::size_t>(t.var)].emplace_back("OBJ", t.coef);
  }
  for (std::size_t r = 0; r < model.rows().size(); ++r) {
    for (const Term& t : model.rows()[r].terms) {
      cols[static_cast<std::size_t>(t.var)].emplace_back(names.rows[r], t.coef);
    }
  }

  std::ostringstream out;
  out << "NAME          " << sanitize(std::string(name)) << "\n";
  out << "OBJSENSE\n    " << (model.objective().maximize ? "MAX" : "MIN") << "\n";
  out << "ROWS\n" << line("N", "OBJ");
  for (std::size_t r = 0; r < model.rows().size(); ++r) {
    const RowSense s = model.rows()[r].sense;
    out << line(s == RowSense::LessEqual ? "L" : (s == RowSense::Equal ? "E" : "G"), names.rows[r]);
  }

  out << "COLUMNS\n";
  bool inInt = false;
  int marker = 0;
  const auto emit_marker = [&](const char* kind) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "MARKER%02d", marker++ % 100);
    out << "    " << pad(buf, 8) << "  'MARKER'                 '" << kind << "'\n";
  };
  for (int j = 0; j < n; ++j) {
    const bool isInt = model.variable(j).kind == VarKind::Binary;
    if (isInt != inInt) {
      emit_marker(isInt ? "INTORG" : "INTEND");
      inInt = isInt;
    }
    const auto& entries = cols[static_cast<std::size_t>(j)];
    if (entries.empty()) {
      out << line("", names.columns[j], "OBJ", "0");
      continue;
    }
    for (const auto& [row, coef] : entries) { out << line("", names.columns[j], row, number(coef)); }
  }
  if (inInt) { emit_marker("INTEND"); }

  out << "RHS\n";
  for (std::size_t r = 0; r < model.rows().size(); ++r) {
    const double rhs = model.rows()[r].rhs;
    if (rhs != 0.0) { out << line("", "RHS", names.rows[r], number(rhs)); }
  }

  out << "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const Variable& v = model.variable(j);
    const std::string& c = names.columns[static_cast<std::size_t>(j)];
    if (v.kind == VarKind::Binary) {
      if (v.lower == v.upper) {
        out << line("FX", "BND", c, number(v.lower));
      } else {
        out << line("UP", "BND", c, "1");
      }
      continue;
    }
    if (v.lower == v.upper) {
      out << line("FX", "BND", c, number(v.lower));
      continue;
    }
    if (v.lower == -kInf && v.upper == kInf) {
      out << line("FR", "BND", c);
      continue;
    }
    if (v.lower == -kInf) {
      out << line("MI", "BND", c);
    } else if (v.lower != 0.0) {
      out << line("LO", "BND", c, number(v.lower));
    }
    if (v.upper != kInf) { out << line("UP", "BND", c, number(v.upper)); }
  }
  out << "ENDATA\n";
  return out.str();
}

LinearModel parse_mps(std::string_view text)
{
  enum class Section { None, Name, ObjSense, Rows, Columns, Rhs, Bounds, End };
  Section section = Section::None;
  LinearModel model;
  bool maximize = false;
  std::string objName;
  std::unordered_map<std::string, int> rowIndex;
  std::unordered_map<std::string, int> colIndex;
  std::vector<Row> rows;
  std::vector<Variable> vars;
  std::vector<bool> integer;
  std::vector<Term> objective;
  bool inInt = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    if (raw.empty() || raw[0] == '*') { continue; }
    const std::vector<std::string> tok = tokens(raw);
    if (tok.empty()) { continue; }
    const std::string where = "line " + std::to_string(lineNo) + ": ";
    if (!std::isspace(static_cast<unsigned char>(raw[0]))) {
      const std::string& head = tok[0];
      if (head == "NAME") {
        section = Section::Name;
      } else if (head == "OBJSENSE") {
        section = Section::ObjSense;
        if (tok.size() > 1) { maximize = tok[1] == "MAX" || tok[1] == "MAXIMIZE"; }
      } else if (head == "ROWS") {
        section = Section::Rows;
      } else if (head == "COLUMNS") {
        section = Section::Columns;
      } else if (head == "RHS") {
        section = Section::Rhs;
      } else if (head == "BOUNDS") {
        section = Section::Bounds;
      } else if (head == "RANGES") {
        throw ParseError(where + "RANGES section is not supported");
      } else if (head == "ENDATA") {
        section = Section::End;
        break;
      } else {
        throw ParseError(where + "unknown section '" + head + "'");
      }
      continue;
    }

    switch (section) {
      case Section::ObjSense:
        maximize = tok[0] == "MAX" || tok[0] == "MAXIMIZE";
        break;
      case Section::Rows: {
        if (tok.size() != 2) { throw ParseError(where + "ROWS entry needs a type and a name"); }
        if (tok[0] == "N") {
          if (objName.empty()) { objName = tok[1]; }
          break;
        }
        Row row;
        row.name = tok[1];
        if (tok[0] == "L") {
          row.sense = RowSense::LessEqual;
        } else if (tok[0] == "G") {
          row.sense = RowSense::GreaterEqual;
        } else if (tok[0] == "E") {
          row.sense = RowSense::Equal;
        } else {
          throw ParseError(where + "unknown row type '" + tok[0] + "'");
        }
        if (!rowIndex.emplace(row.name, static_cast<int>(rows.size())).second) {
          throw ParseError(where + "duplicate row '" + row.name + "'");
        }
        rows.push_back(std::move(row));
        break;
      }
      case Section::Columns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          if (tok[2] == "'INTORG'") {
            inInt = true;
          } else if (tok[2] == "'INTEND'") {
            inInt = false;
          } else {
            throw ParseError(where + "unknown marker " + tok[2]);
          }
          break;
        }
        if (tok.size() != 3 && tok.size() != 5) { throw ParseError(where + "malformed COLUMNS entry"); }
        auto [it, fresh] = colIndex.emplace(tok[0], static_cast<int>(vars.size()));
        if (fresh) {
          vars.push_back(Variable{tok[0], 0.0, kInf, VarKind::Continuous});
          integer.push_back(inInt);
        }
        const int col = it->second;
        for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
          const double coef = parse_number(tok[f + 1], lineNo);
          if (tok[f] == objName) {
            if (coef != 0.0) { objective.push_back({col, coef}); }
            continue;
          }
          const auto r = rowIndex.find(tok[f]);
          if (r == rowIndex.end()) { throw ParseError(where + "unknown row '" + tok[f] + "'"); }
          rows[static_cast<std::size_t>(r->second)].terms.push_back({col, coef});
        }
        break;
      }
      case Section::Rhs: {
        if (tok.size() != 3 && tok.size() != 5) { throw ParseError(where + "malformed RHS entry"); }
        for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
          if (tok[f] == objName) { continue; }
          const auto r = rowIndex.find(tok[f]);
          if (r == rowIndex.end()) { throw ParseError(where + "unknown row '" + tok[f] + "'"); }
          rows[static_cast<std::size_t>(r->second)].rhs = parse_number(tok[f + 1], lineNo);
        }
        break;
      }
      case Section::Bounds: {
        if (tok.size() < 3) { throw ParseError(where + "malformed BOUNDS entry"); }
        const auto c = colIndex.find(tok[2]);
        if (c == colIndex.end()) { throw ParseError(where + "unknown column '" + tok[2] + "'"); }
        Variable& v = vars[static_cast<std::size_t>(c->second)];
        const std::string& type = tok[0];
        const auto value = [&]() {
          if (tok.size() < 4) { throw ParseError(where + "bound " + type + " needs a value"); }
          return parse_number(tok[3], lineNo);
        };
        if (type == "UP") {
          v.upper = value();
        } else if (type == "LO") {
          v.lower = value();
        } else if (type == "FX") {
          v.lower = v.upper = value();
        } else if (type == "FR") {
          v.lower = -kInf;
          v.upper = kInf;
        } else if (type == "MI") {
          v.lower = -kInf;
        } else if (type == "PL") {
          v.upper = kInf;
        } else if (type == "BV") {
          v.lower = 0.0;
          v.upper = 1.0;
          integer[static_cast<std::size_t>(c->second)] = true;
        } else {
          throw ParseError(where + "unsupported bound type '" + type + "'");
        }
        break;
      }
      default: throw ParseError(where + "data outside a section");
    }
  }
  if (section != Section::End) { throw ParseError("missing ENDATA"); }

  for (std::size_t j = 0; j < vars.size(); ++j) {
    Variable v = vars[j];
    if (integer[j]) {
      if (v.upper == kInf) { v.upper = 1.0; }
      if (v.lower < 0.0 || v.upper > 1.0) {
        throw ParseError("integer column " + v.name + " is not binary");
      }
      v.kind = VarKind::Binary;
    }
    model.add_variable(v.name, v.lower, v.upper, v.kind);
  }
  for (Row& r : rows) { model.add_row(std::move(r.name), std::move(r.terms), r.sense, r.rhs); }
  model.set_objective(maximize, std::move(objective));
  return model;
}

Solution import_solution(std::string_view text, const LinearModel& model, double feasTol)
{
  const MpsNames names = mps_names(model);
  std::unordered_map<std::string, int> byName;
  for (int j = 0; j < model.num_vars(); ++j) {
    byName.emplace(names.columns[static_cast<std::size_t>(j)], j);
  }
  for (int j = 0; j < model.num_vars(); ++j) { byName.emplace(model.variable(j).name, j); }

  Solution sol;
  std::vector<double> values(static_cast<std::size_t>(model.num_vars()),
                             std::numeric_limits<double>::quiet_NaN());
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    const std::vector<std::string> tok = tokens(raw);
    if (tok.empty()) { continue; }
    if (tok[0][0] == '#') {
      if (tok.size() >= 3 && (tok[1] == "status:" || tok[1] == "status")) {
        if (tok[2] == "infeasible") {
          sol.status = SolveStatus::Infeasible;
          return sol;
        }
        if (tok[2] == "unbounded") {
          sol.status = SolveStatus::Unbounded;
          return sol;
        }
      }
      continue;
    }
    if (tok.size() != 2) {
      throw ParseError("line " + std::to_string(lineNo) + ": expected 'name value'");
    }
    const auto it = byName.find(tok[0]);
    if (it == byName.end()) { continue; }
    values[static_cast<std::size_t>(it->second)] = parse_number(tok[1], lineNo);
  }
  for (int j = 0; j < model.num_vars(); ++j) {
    if (std::isnan(values[static_cast<std::size_t>(j)])) {
      throw ParseError("missing variable " + model.variable(j).name);
    }
  }
  const auto [violation, where] = model.max_violation(values);
  if (violation > feasTol) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", violation);
    throw SolverError("imported solution violates " + where + " by " + buf);
  }
  for (int j = 0; j < model.num_vars(); ++j) {
    const double v = values[static_cast<std::size_t>(j)];
    if (model.variable(j).kind == VarKind::Binary && std::abs(v - std::round(v)) > feasTol) {
      throw SolverError("imported solution has fractional binary " + model.variable(j).name);
    }
  }
  sol.status = SolveStatus::Optimal;
  sol.objective = model.objective_value(values);
  sol.bestBound = sol.objective;
  sol.values = std::move(values);
  return sol;
}

std::string write_solution(const LinearModel& model, const Solution& solution)
{
  std::ostringstream out;
  out << "# status: " << to_string(solution.status) << "\n";
  if (solution.values.empty()) { return out.str(); }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", solution.objective);
  out << "# objective: " << buf << "\n";
  const MpsNames names = mps_names(model);
  for (int j = 0; j < model.num_vars(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", solution.values[static_cast<std::size_t>(j)]);
    out << names.columns[static_cast<std::size_t>(j)] << " " << buf << "\n";
  }
  return out.str();
}

}  // namespace leximax
