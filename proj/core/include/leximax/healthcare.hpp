/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "leximax/instance.hpp"

namespace leximax {

/// One patient group: s persons, treatment cost c per person, QALY gain q
/// when treated, baseline QALYs alpha.
struct HealthcareGroup {
  std::string name;
  int s = 1;
  double c = 0.0;
  double q = 0.0;
  double alpha = 0.0;
};

struct HealthcareInstance {
  std::vector<HealthcareGroup> groups;
  std::optional<double> budget;

  void validate() const;
};

/// CSV with header `group,s,c,q,alpha` (any column order). A line
/// `B=<value>`, optionally prefixed by '#', sets the budget; other '#' lines
/// are comments.
HealthcareInstance parse_healthcare_csv(std::string_view text);
std::string serialize_healthcare_csv(const HealthcareInstance& instance);

/// u_i = alpha_i + q_i y_i with binary y_i and sum_i s_i c_i y_i <= B.
/// Uses the instance budget unless one is passed explicitly.
AllocationInstance build_healthcare_model(const HealthcareInstance& instance,
                                          std::optional<double> budget = std::nullopt);

}  // namespace leximax
