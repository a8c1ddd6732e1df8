#include "wz/noisy_si.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wz {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

void check_alpha(double alpha) {
    require(std::isfinite(alpha) && alpha > 0.0 && alpha <= 0.5,
            "noise width must be in (0, 1/2]");
}

std::int64_t bin_groups_of(double p, double alpha) {
    double slack = 1.0 - p;
    if (slack / alpha >= 0x1p52)
        throw ResolutionError("bin-group count is not integer-exact at this noise width");
    auto l = static_cast<std::int64_t>(std::floor(slack / alpha));
    if (l < 1) l = 1;
    while (static_cast<double>(l + 1) * alpha <= slack) ++l;
    while (l > 1 && static_cast<double>(l) * alpha > slack) --l;
    return l;
}

} // namespace

AchievabilityPoint achievable_point(double p, double alpha) {
    check_alpha(alpha);
    require(std::isfinite(p) && p > 0.0, "cell width must be positive");
    if (p >= 1.0 - alpha)
        throw std::domain_error("cell width must be below 1 - alpha (no room for a bin group)");

    const CellParameter cp = CellParameter::from_width(p);
    const std::int64_t l = bin_groups_of(p, alpha);
    const double ld = static_cast<double>(l);
    const double mp = std::min(p / ld, alpha);
    const double mq = std::min(cp.q / ld, alpha);
    const double twelve_delta =
        static_cast<double>(cp.n_full) * (3.0 * p * mp - (ld / alpha) * mp * mp * mp) +
        (3.0 * cp.q * mq - (ld / alpha) * mq * mq * mq);

    AchievabilityPoint pt;
    pt.p = p;
    pt.bin_groups = l;
    pt.entropy_bits = entropy_bits_of(cp);
    pt.delta = twelve_delta / 12.0;
    return pt;
}

namespace {

std::vector<double> make_p_grid(double alpha, int size) {
    const double p_max = (1.0 - alpha) * (1.0 - 1e-9);
    const double p_min = std::min(1e-4, p_max / 16.0);
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(size) + 256);
    for (int i = 0; i < size; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(size - 1);
        grid.push_back(p_min * std::pow(p_max / p_min, t));
    }
    // Bin-group transitions p = 1 - l*alpha: sample both sides of each jump.
    auto l_max = static_cast<std::int64_t>(std::floor(1.0 / alpha));
    for (std::int64_t l = 1; l <= l_max; ++l) {
        double pb = 1.0 - static_cast<double>(l) * alpha;
        for (double cand : {pb, std::nextafter(pb, 0.0), std::nextafter(pb, 1.0)})
            if (cand >= p_min && cand <= p_max) grid.push_back(cand);
    }
    // Cell-count transitions p = 1/n: entropy kinks.
    auto n_max = static_cast<std::int64_t>(std::ceil(1.0 / p_min)) + 1;
    n_max = std::min<std::int64_t>(n_max, 1 << 20);
    for (std::int64_t n = 2; n <= n_max; ++n) {
        double pb = 1.0 / static_cast<double>(n);
        if (pb >= p_min && pb <= p_max) grid.push_back(pb);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

} // namespace

std::vector<AchievabilityPoint> achievability_points(double alpha, int p_grid_size) {
    check_alpha(alpha);
    require(p_grid_size >= 256, "cell-width grid must have at least 256 points");

    std::vector<AchievabilityPoint> pts;
    for (double p : make_p_grid(alpha, p_grid_size))
        pts.push_back(achievable_point(p, alpha));

    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        if (a.delta != b.delta) return a.delta < b.delta;
        return a.entropy_bits < b.entropy_bits;
    });
    std::vector<AchievabilityPoint> frontier;
    double best_h = std::numeric_limits<double>::infinity();
    for (const auto& pt : pts) {
        if (pt.entropy_bits < best_h) {
            frontier.push_back(pt);
            best_h = pt.entropy_bits;
        }
    }
    return frontier;
}

PiecewiseCurve achievability_frontier(double alpha, int p_grid_size) {
    PiecewiseCurve curve;
    curve.kind = CurveKind::frontier;
    for (const auto& pt : achievability_points(alpha, p_grid_size))
        curve.knots.push_back({pt.delta, pt.entropy_bits});
    return curve;
}

double upper_bound_n(double delta, const std::vector<AchievabilityPoint>& frontier) {
    require(std::isfinite(delta) && delta > 0.0, "distortion must be positive");
    // Frontier is sorted by delta with decreasing entropy; the best feasible
    // point is the last one within the budget.
    auto it = std::upper_bound(frontier.begin(), frontier.end(), delta,
                               [](double d, const AchievabilityPoint& pt) {
                                   return d < pt.delta;
                               });
    if (it == frontier.begin())
        throw InfeasibleError("upper_bound_n: no frontier point reaches the requested distortion");
    return std::prev(it)->entropy_bits;
}

double upper_bound_n(double delta, double alpha, int p_grid_size) {
    return upper_bound_n(delta, achievability_points(alpha, p_grid_size));
}

double lower_bound_n(double delta, double alpha) {
    check_alpha(alpha);
    require(std::isfinite(delta) && delta > 0.0, "distortion must be positive");
    return h_u_envelope(delta / alpha);
}

namespace {

// Smallest N whose knot 1/(4N) fits within the budget b.
std::int64_t finest_affordable_knot(double b) {
    auto n = static_cast<std::int64_t>(std::ceil(0.25 / b));
    if (n < 1) n = 1;
    while (0.25 / static_cast<double>(n) > b) ++n;
    while (n > 1 && 0.25 / static_cast<double>(n - 1) <= b) --n;
    return n;
}

} // namespace

double converse_discretized(double delta, double alpha, std::int64_t n_y) {
    check_alpha(alpha);
    require(std::isfinite(delta) && delta > 0.0, "distortion must be positive");
    require(n_y >= 8, "side-information discretization needs at least 8 bins");
    const double budget = delta / alpha;
    if (budget >= kMaxDistortion) return 0.0;
    if (budget < kMaxDistortion / static_cast<double>(kEnvelopeKnotCap))
        throw ResolutionError("converse_discretized: budget below the smallest configured knot");

    const double nd = static_cast<double>(n_y);
    const double total = budget * nd;
    const double tol = total * 8.0 * std::numeric_limits<double>::epsilon();
    const std::int64_t nb = envelope_branch(budget);
    // All bins on the first knot below the budget is always feasible.
    double best = std::log2(static_cast<double>(nb + 1));

    for (std::int64_t n1 = std::max<std::int64_t>(1, nb - 1); n1 <= nb + 1; ++n1) {
        const double khi = kMaxDistortion / static_cast<double>(n1);
        const double klo = kMaxDistortion / static_cast<double>(n1 + 1);
        const double log_hi = std::log2(static_cast<double>(n1));
        const double log_lo = std::log2(static_cast<double>(n1 + 1));
        for (std::int64_t m = 0; m <= n_y; ++m) {
            const double coarse = static_cast<double>(m) * khi;
            if (coarse > total + tol) break;
            // Adjacent pair: m bins at khi, the rest at klo.
            if (coarse + static_cast<double>(n_y - m) * klo <= total + tol)
                best = std::min(best,
                                (static_cast<double>(m) * log_hi +
                                 static_cast<double>(n_y - m) * log_lo) /
                                    nd);
            // Same split with one bin diverted to the finest knot the
            // leftover budget affords; this is how the integer optimum
            // escapes the adjacent pair when the budget does not divide.
            if (m < n_y) {
                const double residual =
                    total - coarse - static_cast<double>(n_y - m - 1) * klo;
                if (residual >= kMaxDistortion / static_cast<double>(kEnvelopeKnotCap)) {
                    const double h_res =
                        residual >= kMaxDistortion
                            ? 0.0
                            : std::log2(static_cast<double>(finest_affordable_knot(residual)));
                    best = std::min(best, (static_cast<double>(m) * log_hi +
                                           static_cast<double>(n_y - m - 1) * log_lo + h_res) /
                                              nd);
                }
            }
        }
    }
    return best;
}

} // namespace wz
