#include "doctest.h"

#include <cmath>
#include <vector>

#include "wz/monte_carlo.hpp"
#include "wz/quantized_si.hpp"

using namespace wz;

namespace {

// Exhaustive oracle: per-level budgets on a uniform grid, last level takes
// the leftover.  Feasible by construction, so its value is an upper bound
// on the true optimum.
double brute_force(double delta, std::int64_t k, int steps) {
    const double h_step = 1.0 / static_cast<double>(steps);
    const double budget = static_cast<double>(k) * delta;
    double best = h_u(static_cast<double>(k) * delta);
    auto eval = [&](const std::vector<double>& dk) {
        double h = 0.0;
        for (double v : dk) h += (v > 0.0) ? h_u(static_cast<double>(k) * v) : h_u(1e-12);
        return h / static_cast<double>(k);
    };
    if (k == 2) {
        for (int i = 0; i <= steps; ++i) {
            double d1 = i * h_step * 0.25;
            if (d1 > budget) break;
            double d2 = std::min(budget - d1, 0.25);
            if (d2 <= 0.0) continue;
            best = std::min(best, eval({d1 > 0 ? d1 : 1e-12, d2}));
        }
    } else if (k == 3) {
        for (int i = 0; i <= steps; ++i) {
            double d1 = i * h_step * 0.25;
            if (d1 > budget) break;
            for (int j = 0; j <= steps; ++j) {
                double d2 = j * h_step * 0.25;
                if (d1 + d2 > budget) break;
                double d3 = std::min(budget - d1 - d2, 0.25);
                if (d3 <= 0.0) continue;
                best = std::min(best, eval({d1 > 0 ? d1 : 1e-12, d2 > 0 ? d2 : 1e-12, d3}));
            }
        }
    }
    return best;
}

} // namespace

TEST_CASE("upper and lower bounds") {
    CHECK(upper_bound_q(1.0 / 16.0, 4) == 0.0);
    CHECK(upper_bound_q(1.0 / 64.0, 4) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(upper_bound_q(3.0 / 32.0, 2) == doctest::Approx(0.60087603669285610).epsilon(1e-12));
    CHECK(lower_bound_q(0.2, 1) == h_u_envelope(0.2));
    CHECK(lower_bound_q(1.0 / 16.0, 4) == 0.0);
    CHECK(lower_bound_q(0.09, 4) == 0.0);
    CHECK(lower_bound_q(3.0 / 64.0, 4) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(upper_bound_q(0.0, 4), std::domain_error);
    CHECK_THROWS_AS(upper_bound_q(0.1, 0), std::domain_error);
    CHECK_THROWS_AS(lower_bound_q(-0.1, 4), std::domain_error);
}

TEST_CASE("bounds coincide exactly at knot arguments") {
    for (std::int64_t k : {2, 4, 32})
        for (std::int64_t n = 1; n <= 16; ++n) {
            double delta = 0.25 / static_cast<double>(n * k);
            CHECK(std::abs(upper_bound_q(delta, k) - lower_bound_q(delta, k)) <= 1e-9);
        }
}

TEST_CASE("mixing_allocation hits the lower bound") {
    auto a = mixing_allocation(4, 1, 4);
    CHECK(a.mean_delta == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    CHECK(a.cond_entropy_bits == doctest::Approx(0.0));

    auto b = mixing_allocation(4, 1, 2);
    CHECK(b.mean_delta == doctest::Approx(3.0 / 64.0).epsilon(1e-14));
    CHECK(b.cond_entropy_bits == doctest::Approx(0.5).epsilon(1e-12));

    auto c = mixing_allocation(4, 2, 3);
    CHECK(c.mean_delta == doctest::Approx(11.0 / 384.0).epsilon(1e-14));
    CHECK(c.cond_entropy_bits ==
          doctest::Approx((3.0 + std::log2(3.0)) / 4.0).epsilon(1e-12));

    for (std::int64_t k : {1, 2, 4, 8})
        for (std::int64_t n = 1; n <= 6; ++n)
            for (std::int64_t m = 0; m <= k; ++m) {
                auto alloc = mixing_allocation(k, n, m);
                // Tight point: the mixture lands exactly on the envelope.
                CHECK(std::abs(alloc.cond_entropy_bits -
                               lower_bound_q(alloc.mean_delta, k)) <= 1e-9);
                double mean = 0.0, h = 0.0;
                for (double dk : alloc.per_bin_delta) {
                    CHECK(dk >= 0.0);
                    mean += dk;
                    h += h_u(static_cast<double>(k) * dk);
                }
                mean /= static_cast<double>(k);
                h /= static_cast<double>(k);
                CHECK(std::abs(mean - alloc.mean_delta) <= 1e-12);
                CHECK(std::abs(h - alloc.cond_entropy_bits) <= 1e-9);
            }

    CHECK_THROWS_AS(mixing_allocation(4, 1, 5), std::domain_error);
    CHECK_THROWS_AS(mixing_allocation(4, 1, -1), std::domain_error);
    CHECK_THROWS_AS(mixing_allocation(0, 1, 0), std::domain_error);
}

TEST_CASE("solve_allocation worked examples") {
    auto a = solve_allocation(0.125, 2);
    CHECK(a.cond_entropy_bits == doctest::Approx(0.0));
    CHECK(a.mean_delta <= 0.125 + 1e-12);

    auto b = solve_allocation(3.0 / 32.0, 2);
    CHECK(b.cond_entropy_bits == doctest::Approx(0.5).epsilon(1e-9));
    // The optimal split rescales to the two bracketing knots: (1/8, 1/16).
    REQUIRE(b.per_bin_delta.size() == 2);
    CHECK(b.per_bin_delta[0] == doctest::Approx(0.125).epsilon(1e-9));
    CHECK(b.per_bin_delta[1] == doctest::Approx(0.0625).epsilon(1e-9));

    auto c = solve_allocation(1.0 / 16.0, 2);
    CHECK(c.cond_entropy_bits == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(solve_allocation(0.0, 2), std::domain_error);
    CHECK_THROWS_AS(solve_allocation(0.1, 0), std::domain_error);
    CHECK_THROWS_AS(solve_allocation(0.1, 2, 4), std::domain_error);
}

TEST_CASE("solve_allocation sandwich and feasibility") {
    for (std::int64_t k : {2, 4, 32}) {
        for (int i = 0; i < 60; ++i) {
            double delta = (1e-4 + (0.3 - 1e-4) * i / 59.0) / static_cast<double>(k);
            auto a = solve_allocation(delta, k);
            CHECK(a.cond_entropy_bits >= lower_bound_q(delta, k) - 1e-9);
            CHECK(a.cond_entropy_bits <= upper_bound_q(delta, k) + 1e-9);
            CHECK(a.mean_delta <= delta + 1e-12);
            for (double dk : a.per_bin_delta) CHECK(dk >= 0.0);
        }
    }
}

TEST_CASE("solve_allocation against the exhaustive grid oracle") {
    // Coarser than the acceptance run, as a fast regression net.
    for (std::int64_t k : {2, 3}) {
        for (int i = 0; i < 6; ++i) {
            double delta =
                (0.01 + 0.23 * counter_u01(77, static_cast<std::uint64_t>(10 * k + i))) /
                static_cast<double>(k);
            auto a = solve_allocation(delta, k);
            double brute = brute_force(delta, k, 256);
            CHECK(a.cond_entropy_bits <= brute + 0.02);
            CHECK(brute >= lower_bound_q(delta, k) - 1e-9);
        }
    }
}
