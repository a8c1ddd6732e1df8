#pragma once

#include <cstdint>
#include <vector>

#include "wz/core_ed.hpp"

namespace wz {

/// Side information Y = X + Z (mod 1) with Z ~ Unif[-alpha/2, alpha/2];
/// given Y = y the source is uniform on a set of total length alpha.
struct NoisySIModel {
    double alpha = 0.25; ///< noise support width, in (0, 1/2]
};

/// One operating point of the binned periodic quantizer: cells of combined
/// width p are repeated over bin_groups = floor((1-p)/alpha) groups that sit
/// at least alpha apart, so the decoder can disambiguate them from the side
/// information alone.
struct AchievabilityPoint {
    double p = 0.0;
    std::int64_t bin_groups = 1; ///< L
    double entropy_bits = 0.0;
    double delta = 0.0;
};

/// Entropy and exact expected distortion of the binned scheme with cell
/// width p against noise width alpha.  Requires 0 < p < 1 - alpha.
AchievabilityPoint achievable_point(double p, double alpha);

/// Evaluates achievable_point over a cell-width grid (geometric, refined at
/// every bin-group and cell-count breakpoint) and keeps the Pareto-minimal
/// points, sorted by increasing distortion / strictly decreasing entropy.
std::vector<AchievabilityPoint> achievability_points(double alpha, int p_grid_size = 4096);

/// The same frontier as a PiecewiseCurve (kind = frontier).
PiecewiseCurve achievability_frontier(double alpha, int p_grid_size = 4096);

/// Smallest frontier entropy among points with distortion <= delta.
/// Throws InfeasibleError when no frontier point is that accurate.
double upper_bound_n(double delta, const std::vector<AchievabilityPoint>& frontier);
double upper_bound_n(double delta, double alpha, int p_grid_size = 4096);

/// h_u_envelope(delta / alpha); coincides with lower_bound_q(delta, K)
/// when alpha = 1/K.
double lower_bound_n(double delta, double alpha);

/// Converse with the side-information value discretized into n_y equal
/// bins and every bin's distortion budget restricted to envelope knots:
/// minimizes the mean entropy over adjacent-knot mixtures plus a single
/// residual bin at the finest knot the leftover budget affords.  Always
/// >= lower_bound_n(delta, alpha) and converges to it as n_y grows.
double converse_discretized(double delta, double alpha, std::int64_t n_y);

} // namespace wz
