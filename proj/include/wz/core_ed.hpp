#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wz/errors.hpp"

namespace wz {

/// No quantizer of the Unif([0,1]) source under L1 distortion needs more
/// than 1/4: a single cell with midpoint reconstruction already achieves it.
inline constexpr double kMaxDistortion = 0.25;

/// Largest envelope knot index 1/(4N) that may be queried before a
/// ResolutionError is raised.  Knots are evaluated analytically, so the cap
/// is a policy boundary, not a memory one.
inline constexpr std::int64_t kEnvelopeKnotCap = std::int64_t{1} << 26;

/// Cell-count cap for the closed-form inverse; beyond this the branch index
/// is no longer integer-exact in double precision.
inline constexpr std::int64_t kBranchCap = std::int64_t{1} << 52;

/// Near-uniform cell partition of [0,1]: n_full cells of width p followed by
/// one residual cell of width q = 1 - n_full*p (absent when q = 0).
struct CellParameter {
    double p = 1.0;           ///< common cell width, in (0, 1]
    double q = 0.0;           ///< residual width, in [0, p)
    std::int64_t n_full = 1;  ///< floor(1/p)

    /// Builds the parameter from a cell width, deriving n_full and q.
    /// Throws std::domain_error unless p is in (0, 1].
    static CellParameter from_width(double p);
};

/// One point of an entropy-distortion trade-off, entropy in bits.
struct EDPoint {
    double delta = 0.0;
    double entropy_bits = 0.0;
};

enum class CurveKind { exact, envelope, frontier };

/// Ordered list of EDPoints with strictly increasing distortion and
/// nonincreasing entropy.
struct PiecewiseCurve {
    std::vector<EDPoint> knots;
    CurveKind kind = CurveKind::exact;

    /// Checks ordering/monotonicity (and convexity for envelope curves);
    /// throws std::invalid_argument on violation.
    void validate() const;
};

/// Mean L1 distortion of the partition: (n_full*p^2 + q^2)/4.
double distortion_of(const CellParameter& cp);

/// Output entropy of the partition in bits: -n_full*p*log2(p) - q*log2(q),
/// with 0*log2(0) := 0.
double entropy_bits_of(const CellParameter& cp);

/// Inverse of distortion_of: the unique cell width p with
/// floor(1/p)*p^2 + q^2 = 4*delta.  Domain error outside (0, 1/4];
/// ResolutionError when the cell count would exceed kBranchCap.
CellParameter solve_p(double delta);

/// Entropy-distortion function of the Unif([0,1]) source under L1, in bits.
/// Exactly 0 for delta >= 1/4.
double h_u(double delta);

/// Lower convex envelope of h_u.  Piecewise linear between the knots
/// (1/(4N), log2 N); equals h_u exactly at those knots and nowhere else
/// below 1/4.  ResolutionError below the knot cap.
double h_u_envelope(double delta);

/// Index N of the branch containing delta: 1/(4(N+1)) < delta <= 1/(4N).
std::int64_t envelope_branch(double delta);

/// The first n_max envelope knots (1/(4N), log2 N), N = 1..n_max.
std::vector<EDPoint> envelope_knots(std::int64_t n_max);

/// Best n-point allocation restricted to envelope knots: each of n slots is
/// assigned a knot distortion, the slot mean must not exceed budget, and the
/// mean entropy is minimized.  The optimum mixes the two knots bracketing
/// the budget.  Returns the mean entropy; reports the split via m_out/n_out
/// (m_out slots at knot 1/(4*n_out), the rest at 1/(4*(n_out+1))).
double knot_mixture_entropy(double budget, std::int64_t n_slots,
                            std::int64_t* m_out = nullptr,
                            std::int64_t* n_out = nullptr);

/// Samples h_u (kind=exact) or h_u_envelope (kind=envelope) on the grid.
/// The grid must be nonempty, strictly increasing and within (0, 1/4].
PiecewiseCurve build_curve(std::span<const double> delta_grid, CurveKind kind);

} // namespace wz
