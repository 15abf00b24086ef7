/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <span>

#include "leximax/utility.hpp"

// Exact evaluation of the social welfare functions that balance leximax
// fairness against total utility, plus the classical measures they are
// compared with. All functions are pure.

namespace leximax {

/// Number of order statistics within delta of the minimum: the largest t with
/// u<t> - u<1> <= delta.
int fair_count(const UtilityVector& u, double delta);

/// F1(u) = n u<1> + (n-1) delta + sum_i (u_i - u<1> - delta)^+.
double eval_F1(const UtilityVector& u, double delta);

/// F_k for 2 <= k <= n in min form:
///   sum_{i<k} (n-i+1) u<i> + (n-k+1) min{u<1> + delta, u<k>}
///   + sum_{i>=k} (u<i> - u<1> - delta)^+
double eval_Fk(const UtilityVector& u, double delta, int k);

/// F_k written as the two-branch piecewise expression (weighted prefix plus
/// utilitarian tail when t(u) >= k, plain sum otherwise). It disagrees with
/// eval_Fk whenever t(u) < k; kept only to document that discrepancy and as a
/// fault-injection target for the validation harness.
double eval_Fk_branch_form(const UtilityVector& u, double delta, int k);

/// F_k with the k-1 already-fixed order statistics removed:
///   (n-k+1) min{fixed[0] + delta, min(unfixed)}
///   + sum_{unfixed} (u_i - fixed[0] - delta)^+
/// Requires k == fixed.size() + 1 >= 2, fixed non-decreasing and every unfixed
/// value >= fixed.back().
double eval_Fbar_k(std::span<const double> unfixed, std::span<const double> fixed,
                   double delta, int k);

/// Group form of F1: (N-1) delta + N u<1> + sum_i s_i (u_i - u<1> - delta)^+.
double eval_G1(const UtilityVector& u, const GroupProfile& s, double delta);

/// Group form of eval_Fbar_k. unfixedSizes[i] is the group size of unfixed[i].
double eval_Gbar_k(std::span<const double> unfixed, std::span<const int> unfixedSizes,
                   std::span<const double> fixed, double delta, int k);

/// Gini coefficient sum_{i<j} |u_i - u_j| / (n sum_i u_i). Requires sum > 0.
double gini(const UtilityVector& u);

/// alpha-fairness: sum u_i^(1-alpha)/(1-alpha), or sum log u_i at alpha = 1.
double alpha_welfare(const UtilityVector& u, double alpha);

enum class FairnessTerm { Maximin, OneMinusGini };

/// (1 - lambda) sum_i u_i + lambda Phi(u).
double convex_comb_welfare(const UtilityVector& u, double lambda, FairnessTerm kind);

/// Apply a class-to-class transfer to a sorted vector. Rejects unsorted input,
/// u_low >= u_high and amounts that would break the sort order.
UtilityVector cm_transfer(const UtilityVector& uSorted, const TransferSpec& spec);

}  // namespace leximax
