/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <stdexcept>
#include <string>

namespace leximax {

/// Raised when an operation is called outside its documented domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed instance, listing or MPS text.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The feasible set (or a stage model) admits no solution.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The solver could not prove optimality (limits hit, numerical trouble,
/// rejected external solution).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace leximax
