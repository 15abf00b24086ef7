/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The leximax authors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include "leximax/instance.hpp"
#include "leximax/model.hpp"
#include "leximax/utility.hpp"

// Mixed-integer encodings of the stage problems. The P1 model maximises z1
// subject to z1 <= G1(u); the P_k model (k >= 2) maximises z_k subject to
// z_k <= Gbar_k(u) with the first k-1 order statistics pinned. Unit group
// profiles give the individual-party models.

namespace leximax {

/// Stage-1 model: 1 + 4n rows over {z, u, v, w, delta}. u_i >= 0.
LinearModel encode_P1(int n, const GroupProfile& s, const TradeoffParams& params);

/// Stage-k model for state.k >= 2. Fixed parties are pinned with equality rows.
LinearModel encode_Pk(const SequentialState& state, const GroupProfile& s,
                      const TradeoffParams& params);

/// Multiplier (M - delta) / (M - (last - anchor)) used by the stage-k cuts.
double cut_beta(const SequentialState& state, double delta, double bigM);

/// Append the stage-k valid inequalities (|I_k| + 1 rows).
LinearModel add_valid_cuts(const LinearModel& model, const SequentialState& state,
                           const GroupProfile& s, const TradeoffParams& params);

/// Replace the uniform big-M constants of a stage model (feasible set
/// attached) by per-row constants derived from implied utility bounds. The
/// utility vectors that reach a given z are unchanged; the relaxation is
/// tighter.
LinearModel tighten_big_m(const LinearModel& model, const SequentialState& state,
                          const TradeoffParams& params);

/// Secondary objective sum_i s_i u_i. Hierarchical mode keeps the original
/// objective at >= zStar - feasTol and maximises total utility; epsilon mode
/// adds epsilon * total utility to the original objective.
LinearModel add_tiebreak(const LinearModel& model, double zStar, const GroupProfile& s,
                         const TradeoffParams& params);

/// max(U_hi - U_lo, delta) * 1.001 + 1 over the instance's utility range.
double compute_big_m(const AllocationInstance& instance, const TradeoffParams& params);

}  // namespace leximax
