/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "leximax/instance.hpp"

namespace leximax {

/// Capacitated location data: m candidate shelters, n areas. cost[i*m + j]
/// is the OR-Library allocation cost of area i to shelter j and the
/// distance is cost / demand.
struct ShelterInstance {
  std::string name;
  int m = 0;
  int n = 0;
  std::vector<double> capacity;  // per shelter
  std::vector<double> openCost;  // per shelter
  std::vector<double> demand;    // per area (population s_i)
  std::vector<double> cost;      // n x m, row-major by area

  double distance(int area, int shelter) const
  {
    return cost[static_cast<std::size_t>(area) * static_cast<std::size_t>(m) +
                static_cast<std::size_t>(shelter)] /
           demand[static_cast<std::size_t>(area)];
  }
  void validate() const;
};

/// OR-Library capacitated warehouse format: `m n`, m lines `capacity cost`,
/// then per customer its demand followed by m allocation costs. Tokens may be
/// split across lines arbitrarily.
ShelterInstance parse_orlib_cap(std::string_view text);
std::string serialize_orlib_cap(const ShelterInstance& instance);

/// Short instance names map to OR-Library files: cp92 -> cap92, cp122 -> cap122.
/// Other names are returned unchanged.
std::string orlib_file_name(const std::string& name);

/// Single-source assignment with capacities and an opening budget. Utilities
/// are negative distances shifted by the largest distance so that the model
/// sees u_i in [0, max D].
AllocationInstance build_shelter_model(const ShelterInstance& instance, double budget);

}  // namespace leximax
