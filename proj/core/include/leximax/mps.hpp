/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "leximax/model.hpp"
#include "leximax/solver.hpp"

namespace leximax {

/// Names as they appear in the MPS file: at most 8 characters from
/// [A-Za-z0-9_.], collisions resolved by a deterministic numeric suffix.
/// "OBJ" is reserved for the objective row.
struct MpsNames {
  std::vector<std::string> columns;
  std::vector<std::string> rows;
};

MpsNames mps_names(const LinearModel& model);

/// Fixed-format MPS with an OBJSENSE section and INTORG/INTEND markers
/// around binary columns. Binary bounds are written explicitly.
std::string export_mps(const LinearModel& model, std::string_view name = "LEXIMAX");

/// Reads the subset of MPS that export_mps writes (whitespace separated, so
/// free-format files work too). Integer columns must have bounds in [0, 1].
LinearModel parse_mps(std::string_view text);

/// Imports a "name value" listing (MPS names or model names) and re-verifies
/// the point against every row and bound within feasTol. Lines starting with
/// '#' are comments, except "# status: infeasible" / "# status: unbounded".
Solution import_solution(std::string_view text, const LinearModel& model, double feasTol = 1e-6);

/// Listing in the format import_solution reads, keyed by MPS names.
std::string write_solution(const LinearModel& model, const Solution& solution);

}  // namespace leximax
