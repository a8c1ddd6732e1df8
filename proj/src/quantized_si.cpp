#include "wz/quantized_si.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wz {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

// Candidate allocation in rescaled units d_k = K * delta_k.
struct Candidate {
    std::vector<double> d;
    double entropy = std::numeric_limits<double>::infinity();
};

double mean_entropy(const std::vector<double>& d) {
    double h = 0.0;
    for (double v : d) h += h_u(v);
    return h / static_cast<double>(d.size());
}

Allocation finish(const std::vector<double>& d, std::int64_t k) {
    Allocation a;
    a.per_bin_delta.reserve(d.size());
    double sum = 0.0;
    for (double v : d) {
        double dk = v / static_cast<double>(k);
        a.per_bin_delta.push_back(dk);
        sum += dk;
    }
    std::sort(a.per_bin_delta.begin(), a.per_bin_delta.end(), std::greater<>());
    a.mean_delta = sum / static_cast<double>(k);
    a.cond_entropy_bits = mean_entropy(d);
    return a;
}

} // namespace

double upper_bound_q(double delta, std::int64_t k_levels) {
    require(delta > 0.0, "distortion must be positive");
    require(k_levels >= 1, "level count must be positive");
    return h_u(static_cast<double>(k_levels) * delta);
}

double lower_bound_q(double delta, std::int64_t k_levels) {
    require(delta > 0.0, "distortion must be positive");
    require(k_levels >= 1, "level count must be positive");
    return h_u_envelope(static_cast<double>(k_levels) * delta);
}

Allocation mixing_allocation(std::int64_t k_levels, std::int64_t n_rate, std::int64_t m_split) {
    require(k_levels >= 1, "level count must be positive");
    require(n_rate >= 1, "rate index must be positive");
    require(m_split >= 0 && m_split <= k_levels, "split must lie in [0, K]");
    const double kd = static_cast<double>(k_levels);
    const double d_lo_rate = kMaxDistortion / (static_cast<double>(n_rate) * kd);
    const double d_hi_rate = kMaxDistortion / (static_cast<double>(n_rate + 1) * kd);
    Allocation a;
    a.per_bin_delta.assign(static_cast<std::size_t>(m_split), d_lo_rate);
    a.per_bin_delta.resize(static_cast<std::size_t>(k_levels), d_hi_rate);
    double sum = 0.0;
    double h = 0.0;
    for (double dk : a.per_bin_delta) {
        sum += dk;
        h += h_u(kd * dk);
    }
    a.mean_delta = sum / kd;
    a.cond_entropy_bits = h / kd;
    return a;
}

Allocation solve_allocation(double delta, std::int64_t k_levels, int grid_size) {
    require(std::isfinite(delta) && delta > 0.0, "distortion must be positive");
    require(k_levels >= 1, "level count must be positive");
    require(grid_size >= 16, "grid size must be at least 16");

    const double kd = static_cast<double>(k_levels);
    const double budget = kd * delta; // per-level budget in rescaled units
    const double total = kd * budget; // sum_k d_k allowance
    const double feas_tol = total * 8.0 * std::numeric_limits<double>::epsilon();

    Candidate best;
    best.d.assign(static_cast<std::size_t>(k_levels), budget);
    best.entropy = h_u(budget);

    auto consider = [&](std::vector<double> d) {
        double sum = 0.0;
        for (double v : d) {
            if (v < 0.0) return;
            sum += v;
        }
        if (sum > total + feas_tol) return;
        double h = mean_entropy(d);
        if (h < best.entropy - 1e-15) {
            best.d = std::move(d);
            best.entropy = h;
        }
    };

    if (budget < kMaxDistortion) {
        const std::int64_t nb = envelope_branch(budget);

        // Adjacent-knot mixtures around the budget's branch, plus variants
        // with one level off the pair soaking up the leftover budget (the
        // integer optimum can need a third, non-adjacent value there).
        for (std::int64_t n = std::max<std::int64_t>(1, nb - 2); n <= nb + 2; ++n) {
            const double khi = kMaxDistortion / static_cast<double>(n);
            const double klo = kMaxDistortion / static_cast<double>(n + 1);
            for (std::int64_t m = 0; m <= k_levels; ++m) {
                if (static_cast<double>(m) * khi > total + feas_tol) break;
                if (static_cast<double>(m) * khi + static_cast<double>(k_levels - m) * klo <=
                    total + feas_tol) {
                    std::vector<double> d(static_cast<std::size_t>(m), khi);
                    d.resize(static_cast<std::size_t>(k_levels), klo);
                    consider(std::move(d));
                }
                if (m < k_levels) {
                    const double residual = total - static_cast<double>(m) * khi -
                                            static_cast<double>(k_levels - 1 - m) * klo;
                    if (residual > kMaxDistortion / static_cast<double>(kEnvelopeKnotCap)) {
                        std::vector<double> d(static_cast<std::size_t>(m), khi);
                        d.resize(static_cast<std::size_t>(k_levels - 1), klo);
                        d.push_back(residual);
                        consider(std::move(d));
                    }
                }
            }
        }

        // One interior level on a log grid, the remaining K-1 levels on the
        // best adjacent-knot mixture for the leftover budget.
        if (k_levels >= 2) {
            const double d_lo = std::max(budget / 256.0, 1e-9);
            const double d_hi = kMaxDistortion;
            const double ratio = d_hi / d_lo;
            for (int i = 0; i <= grid_size; ++i) {
                double d1 = d_lo * std::pow(ratio, static_cast<double>(i) /
                                                       static_cast<double>(grid_size));
                if (i == grid_size) d1 = d_hi;
                double rest_budget = (total - d1) / (kd - 1.0);
                if (rest_budget <= kMaxDistortion / static_cast<double>(kEnvelopeKnotCap))
                    continue;
                std::int64_t m = 0;
                std::int64_t n = 0;
                knot_mixture_entropy(rest_budget, k_levels - 1, &m, &n);
                const double khi = kMaxDistortion / static_cast<double>(n);
                const double klo = kMaxDistortion / static_cast<double>(n + 1);
                std::vector<double> d(static_cast<std::size_t>(m), khi);
                d.resize(static_cast<std::size_t>(k_levels - 1), klo);
                d.push_back(d1);
                consider(std::move(d));
            }
        }
    }

    return finish(best.d, k_levels);
}

} // namespace wz
