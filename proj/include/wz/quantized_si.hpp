#pragma once

#include <cstdint>
#include <vector>

#include "wz/core_ed.hpp"

namespace wz {

/// Side information equal to the index of which of K equal subintervals of
/// [0,1] contains the source; available at encoder and decoder, so the
/// decoder-only and conditional entropy-distortion functions coincide.
struct QuantizedSIModel {
    std::int64_t levels = 1; ///< K >= 1
};

/// Per-level distortion budgets {delta_k} together with the conditional
/// entropy (1/K) * sum_k h_u(K * delta_k) they induce.
struct Allocation {
    std::vector<double> per_bin_delta;
    double mean_delta = 0.0;
    double cond_entropy_bits = 0.0;
};

/// h_u(K * delta): achieved by spending the same budget in every level.
double upper_bound_q(double delta, std::int64_t k_levels);

/// h_u_envelope(K * delta): the convex relaxation of the allocation problem.
double lower_bound_q(double delta, std::int64_t k_levels);

/// Allocation with M levels at the rate-log2(N) knot and K-M levels at the
/// rate-log2(N+1) knot; lands exactly on the lower bound curve at its own
/// mean distortion (the K+1 tight points per rate interval).
Allocation mixing_allocation(std::int64_t k_levels, std::int64_t n_rate, std::int64_t m_split);

/// Best-found allocation for the per-level budget problem
///   min (1/K) sum h_u(K*delta_k)  s.t.  (1/K) sum delta_k <= delta.
/// Searches uniform spending, adjacent-knot mixtures (with leftover budget
/// absorbed into one level) and a one-interior-level grid refinement; the
/// result always lies within [lower_bound_q, upper_bound_q].
Allocation solve_allocation(double delta, std::int64_t k_levels, int grid_size = 512);

} // namespace wz
