/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "leximax/milp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "leximax/errors.hpp"

namespace leximax {

namespace {

std::string nm(const char* prefix, int oneBased) { return prefix + std::to_string(oneBased); }

void check_params(const TradeoffParams& params)
{
  params.validate();
  const double bigM = params.big_m();
  if (!(bigM > params.delta)) { throw PreconditionError("big-M must exceed delta"); }
}

}  // namespace

LinearModel encode_P1(int n, const GroupProfile& s, const TradeoffParams& params)
{
  if (n < 1) { throw PreconditionError("need at least one party"); }
  if (s.size() != static_cast<std::size_t>(n)) { throw PreconditionError("group profile length mismatch"); }
  check_params(params);
  const double delta = params.delta;
  const double bigM = params.big_m();
  const double total = static_cast<double>(s.total());

  LinearModel m;
  VarMap roles;
  roles.stage = 1;
  roles.z = m.add_variable("z", -kInf, kInf);
  for (int i = 0; i < n; ++i) { roles.u.push_back(m.add_variable(nm("u", i + 1), 0.0, kInf)); }
  for (int i = 0; i < n; ++i) { roles.v.push_back(m.add_variable(nm("v", i + 1), -kInf, kInf)); }
  roles.w = m.add_variable("w", -kInf, kInf);
  for (int i = 0; i < n; ++i) { roles.delta.push_back(m.add_binary(nm("d", i + 1))); }
  for (int i = 0; i < n; ++i) { roles.active.push_back(i); }

  std::vector<Term> cap{{roles.z, 1.0}};
  for (int i = 0; i < n; ++i) { cap.push_back({roles.v[i], -static_cast<double>(s[i])}); }
  m.add_row("zcap", std::move(cap), RowSense::LessEqual, (total - 1.0) * delta);

  for (int i = 0; i < n; ++i) {
    const int u = roles.u[i], v = roles.v[i], d = roles.delta[i];
    m.add_row(nm("vlo", i + 1), {{v, 1.0}, {u, -1.0}}, RowSense::GreaterEqual, -delta);
    m.add_row(nm("vhi", i + 1), {{v, 1.0}, {u, -1.0}, {d, delta}}, RowSense::LessEqual, 0.0);
    m.add_row(nm("wlo", i + 1), {{v, 1.0}, {roles.w, -1.0}}, RowSense::GreaterEqual, 0.0);
    m.add_row(nm("whi", i + 1), {{v, 1.0}, {roles.w, -1.0}, {d, -(bigM - delta)}},
              RowSense::LessEqual, 0.0);
  }
  m.set_objective(true, {{roles.z, 1.0}});
  m.roles() = std::move(roles);
  return m;
}

LinearModel encode_Pk(const SequentialState& state, const GroupProfile& s,
                      const TradeoffParams& params)
{
  state.validate();
  if (state.k < 2) { throw PreconditionError("encode_Pk needs k >= 2"); }
  if (state.active.empty()) { throw PreconditionError("no active parties left"); }
  if (s.size() != static_cast<std::size_t>(state.parties)) {
    throw PreconditionError("group profile length mismatch");
  }
  check_params(params);
  const double delta = params.delta;
  const double bigM = params.big_m();
  const double anchor = state.anchor();
  const int n = state.parties;
  const int a = static_cast<int>(state.active.size());

  LinearModel m;
  VarMap roles;
  roles.stage = state.k;
  roles.z = m.add_variable("z", -kInf, kInf);
  for (int i = 0; i < n; ++i) { roles.u.push_back(m.add_variable(nm("u", i + 1), 0.0, kInf)); }
  roles.sigma = m.add_variable("sig", -kInf, kInf);
  roles.w = m.add_variable("w", -kInf, kInf);
  roles.active = state.active;
  for (int i : state.active) { roles.v.push_back(m.add_variable(nm("v", i + 1), 0.0, kInf)); }
  for (int i : state.active) { roles.delta.push_back(m.add_binary(nm("d", i + 1))); }
  for (int i : state.active) { roles.eps.push_back(m.add_binary(nm("e", i + 1))); }

  double weight = 0.0;
  for (int i : state.active) { weight += s[static_cast<std::size_t>(i)]; }

  std::vector<Term> cap{{roles.z, 1.0}, {roles.sigma, -weight}};
  for (int p = 0; p < a; ++p) {
    cap.push_back({roles.v[p], -static_cast<double>(s[static_cast<std::size_t>(state.active[p])])});
  }
  m.add_row("zcap", std::move(cap), RowSense::LessEqual, 0.0);

  for (int p = 0; p < a; ++p) {
    const int party = state.active[p];
    const int u = roles.u[party], v = roles.v[p], d = roles.delta[p];
    m.add_row(nm("vm", party + 1), {{v, 1.0}, {d, -bigM}}, RowSense::LessEqual, 0.0);
    m.add_row(nm("vh", party + 1), {{v, 1.0}, {u, -1.0}, {d, bigM}}, RowSense::LessEqual,
              -anchor - delta + bigM);
  }
  m.add_row("sigfair", {{roles.sigma, 1.0}}, RowSense::LessEqual, anchor + delta);
  m.add_row("sigw", {{roles.sigma, 1.0}, {roles.w, -1.0}}, RowSense::LessEqual, 0.0);
  std::vector<Term> pick;
  for (int p = 0; p < a; ++p) {
    const int party = state.active[p];
    const int u = roles.u[party], e = roles.eps[p];
    m.add_row(nm("wmin", party + 1), {{roles.w, 1.0}, {u, -1.0}}, RowSense::LessEqual, 0.0);
    m.add_row(nm("wsel", party + 1), {{u, 1.0}, {roles.w, -1.0}, {e, bigM}}, RowSense::LessEqual,
              bigM);
    m.add_row(nm("urng", party + 1), {{u, 1.0}}, RowSense::LessEqual, anchor + bigM);
    pick.push_back({e, 1.0});
  }
  m.add_row("onemin", std::move(pick), RowSense::Equal, 1.0);
  m.add_row("wfloor", {{roles.w, 1.0}}, RowSense::GreaterEqual, state.last());
  for (std::size_t j = 0; j < state.fixedIdx.size(); ++j) {
    const int party = state.fixedIdx[j];
    m.add_row(nm("fix", party + 1), {{roles.u[party], 1.0}}, RowSense::Equal, state.fixedVal[j]);
  }
  m.set_objective(true, {{roles.z, 1.0}});
  m.roles() = std::move(roles);
  return m;
}

double cut_beta(const SequentialState& state, double delta, double bigM)
{
  if (state.fixedVal.empty()) { throw PreconditionError("cuts need a fixed prefix"); }
  const double denom = bigM - (state.last() - state.anchor());
  if (!(denom > 0.0)) {
    throw PreconditionError("big-M must exceed the spread of the fixed prefix");
  }
  return (bigM - delta) / denom;
}

LinearModel add_valid_cuts(const LinearModel& model, const SequentialState& state,
                           const GroupProfile& s, const TradeoffParams& params)
{
  if (state.k < 2) { throw PreconditionError("cuts apply to stages k >= 2"); }
  const double beta = cut_beta(state, params.delta, params.big_m());
  LinearModel out = model;
  const VarMap& roles = out.roles();
  double weight = 0.0;
  for (int i : state.active) { weight += s[static_cast<std::size_t>(i)]; }

  std::vector<Term> total{{roles.z, 1.0}};
  for (int i : state.active) {
    total.push_back({roles.u[i], -static_cast<double>(s[static_cast<std::size_t>(i)])});
  }
  out.add_row("cutsum", std::move(total), RowSense::LessEqual, 0.0);

  for (int i : state.active) {
    std::vector<Term> terms{{roles.z, 1.0}, {roles.u[i], -weight}};
    double others = 0.0;
    for (int j : state.active) {
      if (j == i) { continue; }
      const double sj = s[static_cast<std::size_t>(j)];
      terms.push_back({roles.u[j], -beta * sj});
      others += sj;
    }
    out.add_row(nm("cut", i + 1), std::move(terms), RowSense::LessEqual,
                -beta * state.last() * others);
  }
  return out;
}

LinearModel tighten_big_m(const LinearModel& model, const SequentialState& state,
                          const TradeoffParams& params)
{
  const int stage = model.roles().stage;
  if (stage < 1) { return model; }
  const double bigM = params.big_m();
  const double delta = params.delta;
  const auto bounds = implied_bounds(model);
  const VarMap& roles = model.roles();
  const auto ubounds = [&](int party) { return bounds[static_cast<std::size_t>(roles.u[static_cast<std::size_t>(party)])]; };
  // At the natural completion w is the smallest utility, so no w below the
  // smallest utility bound is ever needed.
  double wlo = kInf;
  for (int i = 0; i < static_cast<int>(roles.u.size()); ++i) { wlo = std::min(wlo, ubounds(i).first); }
  const double cutoff = stage >= 2 ? state.anchor() + delta : 0.0;

  LinearModel out = model;
  for (int r = 0; r < out.num_rows(); ++r) {
    Row row = out.rows()[static_cast<std::size_t>(r)];
    const auto digits = row.name.find_first_of("0123456789");
    if (digits == std::string::npos || digits == 0) { continue; }
    const std::string kind = row.name.substr(0, digits);
    const int party = std::stoi(row.name.substr(digits)) - 1;
    if (party < 0 || party >= static_cast<int>(roles.u.size())) { continue; }
    const auto [lo, hi] = ubounds(party);
    // Each constant is the largest slack the row needs with its binary "off"
    // for any u in [lo, hi].
    double current;
    double m;
    if (stage == 1 && kind == "whi") {
      current = bigM - delta;
      m = hi - delta - wlo;
    } else if (stage >= 2 && kind == "vm") {
      current = bigM;
      m = hi - cutoff;
    } else if (stage >= 2 && kind == "vh") {
      current = bigM;
      m = cutoff - lo;
    } else if (stage >= 2 && kind == "wsel") {
      current = bigM;
      m = hi - state.last();
    } else {
      continue;
    }
    if (!std::isfinite(m) || m >= current) { continue; }
    // Round up onto the feasTol grid: noise in a big-M constant shows up as
    // off-grid utilities at the optimum. Rounding down would cut off the
    // extreme point itself; the 1e-3 step allowance stays inside the 1e-9
    // margin the bounds already carry.
    m = std::max(m, 0.0);
    m = std::ceil(m / params.feasTol - 1e-3) * params.feasTol;
    if (m <= params.feasTol) { m = 0.0; }
    m = std::min(m, current);
    for (Term& t : row.terms) {
      if (std::abs(t.coef) == current && out.variable(t.var).kind == VarKind::Binary) {
        t.coef = t.coef > 0.0 ? m : -m;
      }
    }
    std::erase_if(row.terms, [](const Term& t) { return t.coef == 0.0; });
    if (kind == "vh") { row.rhs = -cutoff + m; }
    if (kind == "wsel") { row.rhs = m; }
    out.replace_row(r, std::move(row));
  }
  return out;
}

LinearModel add_tiebreak(const LinearModel& model, double zStar, const GroupProfile& s,
                         const TradeoffParams& params)
{
  LinearModel out = model;
  const std::vector<int>& u = out.roles().u;
  if (s.size() != u.size()) { throw PreconditionError("group profile length mismatch"); }
  const Objective original = out.objective();
  std::vector<Term> totalUtility;
  for (std::size_t i = 0; i < u.size(); ++i) {
    totalUtility.push_back({u[i], static_cast<double>(s[i])});
  }
  switch (params.tieBreak.mode) {
    case TieBreak::Mode::None: break;
    case TieBreak::Mode::Hierarchical: {
      const RowSense sense = original.maximize ? RowSense::GreaterEqual : RowSense::LessEqual;
      const double rhs = original.maximize ? zStar - params.feasTol : zStar + params.feasTol;
      out.add_row("keepopt", original.terms, sense, rhs);
      out.set_objective(true, std::move(totalUtility));
      break;
    }
    case TieBreak::Mode::Epsilon: {
      std::vector<Term> terms = original.terms;
      const double sign = original.maximize ? 1.0 : -1.0;
      for (Term t : totalUtility) { terms.push_back({t.var, sign * params.tieBreak.epsilon * t.coef}); }
      out.set_objective(original.maximize, std::move(terms));
      break;
    }
  }
  return out;
}

double compute_big_m(const AllocationInstance& instance, const TradeoffParams& params)
{
  const double range = instance.utilityHigh - instance.utilityLow;
  if (!std::isfinite(range) || range < 0.0) {
    throw PreconditionError("instance utility range must be finite to derive big-M");
  }
  return std::max(range, params.delta) * 1.001 + 1.0;
}

}  // namespace leximax
