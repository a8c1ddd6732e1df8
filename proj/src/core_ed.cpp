#include "wz/core_ed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wz {

namespace {

constexpr double kDiscriminantTol = 1e-12;

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

} // namespace

CellParameter CellParameter::from_width(double p) {
    require(std::isfinite(p) && p > 0.0 && p <= 1.0, "cell width must be in (0, 1]");
    if (p < 0x1p-52)
        throw ResolutionError("from_width: cell count is not integer-exact at this width");
    auto n = static_cast<std::int64_t>(std::floor(1.0 / p));
    if (n < 1) n = 1;
    // floor(1/p) computed through division can be off by one near p = 1/N;
    // fix it against the defining inequalities n*p <= 1 < (n+1)*p.
    while (static_cast<double>(n + 1) * p <= 1.0) ++n;
    while (static_cast<double>(n) * p > 1.0) --n;
    CellParameter cp;
    cp.p = p;
    cp.n_full = n;
    cp.q = std::max(0.0, 1.0 - static_cast<double>(n) * p);
    return cp;
}

double distortion_of(const CellParameter& cp) {
    require(cp.p > 0.0 && cp.p <= 1.0, "cell width must be in (0, 1]");
    return (static_cast<double>(cp.n_full) * cp.p * cp.p + cp.q * cp.q) * 0.25;
}

double entropy_bits_of(const CellParameter& cp) {
    require(cp.p > 0.0 && cp.p <= 1.0, "cell width must be in (0, 1]");
    double h = -static_cast<double>(cp.n_full) * cp.p * std::log2(cp.p);
    if (cp.q > 0.0) h -= cp.q * std::log2(cp.q);
    return h;
}

std::int64_t envelope_branch(double delta) {
    require(delta > 0.0 && delta <= kMaxDistortion, "distortion must be in (0, 1/4]");
    if (delta < kMaxDistortion / 0x1p62)
        throw ResolutionError("envelope_branch: branch index exceeds integer range");
    auto n = static_cast<std::int64_t>(std::floor(kMaxDistortion / delta));
    if (n < 1) n = 1;
    while (n > 1 && delta > kMaxDistortion / static_cast<double>(n)) --n;
    while (delta <= kMaxDistortion / static_cast<double>(n + 1)) ++n;
    return n;
}

namespace {

// Distortion restricted to branch N (p in (1/(N+1), 1/N], q = 1 - N*p):
// 4*delta = N*(N+1)*p^2 - 2*N*p + 1, increasing in p on the branch.
double branch_distortion(std::int64_t n, double p) {
    double nd = static_cast<double>(n);
    return (nd * (nd + 1.0) * p * p - 2.0 * nd * p + 1.0) * 0.25;
}

double bisect_branch(std::int64_t n, double delta) {
    double lo = 1.0 / static_cast<double>(n + 1);
    double hi = 1.0 / static_cast<double>(n);
    for (int it = 0; it < 200 && lo < hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (branch_distortion(n, mid) < delta)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

} // namespace

CellParameter solve_p(double delta) {
    require(std::isfinite(delta) && delta > 0.0 && delta <= kMaxDistortion,
            "distortion must be in (0, 1/4]");
    if (delta < kMaxDistortion / static_cast<double>(kBranchCap))
        throw ResolutionError("solve_p: distortion below closed-form branch resolution");

    const std::int64_t n = envelope_branch(delta);
    const double nd = static_cast<double>(n);
    double disc = nd * (4.0 * delta * (nd + 1.0) - 1.0);
    double p;
    if (disc <= kDiscriminantTol) {
        p = bisect_branch(n, delta);
    } else {
        const double s = std::sqrt(disc) / (nd * (nd + 1.0));
        const double vertex = 1.0 / (nd + 1.0);
        p = vertex + s;
        // The parabola's vertex sits exactly on the open left edge of the
        // branch, so the lower root can never be admissible; flag the
        // configuration instead of guessing if that ever fails to hold.
        const double lower = vertex - s;
        if (lower > vertex + 1e-15 && lower <= 1.0 / nd)
            throw std::domain_error("solve_p: ambiguous root inside branch");
    }
    p = std::min(p, std::min(1.0, 1.0 / nd));
    return CellParameter::from_width(p);
}

double h_u(double delta) {
    require(std::isfinite(delta) && delta > 0.0, "distortion must be positive");
    if (delta >= kMaxDistortion) return 0.0;
    return entropy_bits_of(solve_p(delta));
}

double h_u_envelope(double delta) {
    require(std::isfinite(delta) && delta > 0.0, "distortion must be positive");
    if (delta >= kMaxDistortion) return 0.0;
    if (delta < kMaxDistortion / static_cast<double>(kEnvelopeKnotCap))
        throw ResolutionError("h_u_envelope: distortion below the smallest configured knot");
    const std::int64_t n = envelope_branch(delta);
    const double hi = kMaxDistortion / static_cast<double>(n);
    const double lo = kMaxDistortion / static_cast<double>(n + 1);
    const double t = (delta - lo) / (hi - lo);
    return t * std::log2(static_cast<double>(n)) +
           (1.0 - t) * std::log2(static_cast<double>(n + 1));
}

std::vector<EDPoint> envelope_knots(std::int64_t n_max) {
    require(n_max >= 1, "knot count must be positive");
    if (n_max > kEnvelopeKnotCap)
        throw ResolutionError("envelope_knots: request beyond the knot cap");
    std::vector<EDPoint> knots(static_cast<std::size_t>(n_max));
    for (std::int64_t n = 1; n <= n_max; ++n) {
        knots[static_cast<std::size_t>(n - 1)] = {
            kMaxDistortion / static_cast<double>(n),
            std::log2(static_cast<double>(n))};
    }
    std::reverse(knots.begin(), knots.end()); // ascending delta
    return knots;
}

double knot_mixture_entropy(double budget, std::int64_t n_slots,
                            std::int64_t* m_out, std::int64_t* n_out) {
    require(std::isfinite(budget) && budget > 0.0, "budget must be positive");
    require(n_slots >= 1, "slot count must be positive");
    if (budget >= kMaxDistortion) {
        if (m_out) *m_out = n_slots;
        if (n_out) *n_out = 1;
        return 0.0;
    }
    if (budget < kMaxDistortion / static_cast<double>(kEnvelopeKnotCap))
        throw ResolutionError("knot_mixture_entropy: budget below the smallest configured knot");
    const std::int64_t n = envelope_branch(budget);
    const double khi = kMaxDistortion / static_cast<double>(n);
    const double klo = kMaxDistortion / static_cast<double>(n + 1);
    // Largest admissible count at the cheap knot khi given the mean budget.
    double x = (budget - klo) / (khi - klo) * static_cast<double>(n_slots);
    auto m = static_cast<std::int64_t>(std::floor(x + 1e-9));
    m = std::clamp<std::int64_t>(m, 0, n_slots);
    const double tol = budget * 8.0 * std::numeric_limits<double>::epsilon();
    while (m > 0 &&
           static_cast<double>(m) * khi + static_cast<double>(n_slots - m) * klo >
               budget * static_cast<double>(n_slots) + tol * static_cast<double>(n_slots))
        --m;
    if (m_out) *m_out = m;
    if (n_out) *n_out = n;
    return (static_cast<double>(m) * std::log2(static_cast<double>(n)) +
            static_cast<double>(n_slots - m) * std::log2(static_cast<double>(n + 1))) /
           static_cast<double>(n_slots);
}

PiecewiseCurve build_curve(std::span<const double> delta_grid, CurveKind kind) {
    require(!delta_grid.empty(), "delta grid must be nonempty");
    require(kind != CurveKind::frontier, "build_curve samples exact or envelope curves only");
    double prev = 0.0;
    for (double d : delta_grid) {
        require(d > prev, "delta grid must be strictly increasing and positive");
        require(d <= kMaxDistortion, "delta grid must stay within (0, 1/4]");
        prev = d;
    }
    PiecewiseCurve curve;
    curve.kind = kind;
    curve.knots.reserve(delta_grid.size());
    for (double d : delta_grid) {
        double h = (kind == CurveKind::exact) ? h_u(d) : h_u_envelope(d);
        curve.knots.push_back({d, h});
    }
    return curve;
}

void PiecewiseCurve::validate() const {
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i].delta > knots[i - 1].delta))
            throw std::invalid_argument("curve knots must increase strictly in delta");
        if (knots[i].entropy_bits > knots[i - 1].entropy_bits + 1e-12)
            throw std::invalid_argument("curve entropy must be nonincreasing in delta");
    }
    if (kind == CurveKind::envelope && knots.size() >= 3) {
        for (std::size_t i = 2; i < knots.size(); ++i) {
            double s0 = (knots[i - 1].entropy_bits - knots[i - 2].entropy_bits) /
                        (knots[i - 1].delta - knots[i - 2].delta);
            double s1 = (knots[i].entropy_bits - knots[i - 1].entropy_bits) /
                        (knots[i].delta - knots[i - 1].delta);
            if (s1 < s0 - 1e-9)
                throw std::invalid_argument("envelope curve must be convex");
        }
    }
}

} // namespace wz
