// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion.  Exit code 0 iff all pass.
//
// Usage: acceptance_tests [path-to-wzbounds-binary]
// The binary path is needed only for the byte-determinism criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wz/merge.hpp"
#include "wz/monte_carlo.hpp"
#include "wz/noisy_si.hpp"
#include "wz/quantized_si.hpp"
#include "wz/scheme.hpp"
#include "wz/sweep.hpp"

using namespace wz;

namespace {

std::string g_cli_path = "./wzbounds";
int g_failures = 0;

void run_criterion(int number, const char* blurb, double limit_seconds,
                   const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = elapsed < limit_seconds;
    if (!ok || !in_time) ++g_failures;
    std::printf("%s  %2d. %s (%.2fs < %.0fs)%s%s\n", (ok && in_time) ? "PASS" : "FAIL",
                number, blurb, elapsed, limit_seconds, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
}

// ---- criterion 3 helpers: numeric lower convex hull ------------------------

std::vector<EDPoint> lower_hull(std::vector<EDPoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const EDPoint& a, const EDPoint& b) {
        if (a.delta != b.delta) return a.delta < b.delta;
        return a.entropy_bits < b.entropy_bits;
    });
    std::vector<EDPoint> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            double cross = (b.delta - a.delta) * (p.entropy_bits - a.entropy_bits) -
                           (b.entropy_bits - a.entropy_bits) * (p.delta - a.delta);
            if (cross <= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    return hull;
}

double hull_value(const std::vector<EDPoint>& hull, double delta) {
    auto it = std::lower_bound(hull.begin(), hull.end(), delta,
                               [](const EDPoint& p, double d) { return p.delta < d; });
    if (it == hull.begin()) return it->entropy_bits;
    if (it == hull.end()) return hull.back().entropy_bits;
    const auto& b = *it;
    const auto& a = *std::prev(it);
    double t = (delta - a.delta) / (b.delta - a.delta);
    return a.entropy_bits + t * (b.entropy_bits - a.entropy_bits);
}

// ---- criterion 4 helper: exhaustive simplex-grid search --------------------

double brute_force_allocation(double delta, std::int64_t k) {
    const double step = 1.0 / 2048.0;
    const double budget = static_cast<double>(k) * delta; // sum of per-level deltas
    const double kd = static_cast<double>(k);
    double best = h_u(kd * delta); // uniform spending
    if (k == 2) {
        for (int i = 1; i * step <= 0.25 + 1e-15; ++i) {
            double d1 = i * step;
            if (d1 > budget) break;
            auto j = static_cast<int>(std::floor((budget - d1) / step + 1e-9));
            if (j < 1) continue;
            double d2 = std::min(j * step, 0.25);
            best = std::min(best, 0.5 * (h_u(kd * d1) + h_u(kd * d2)));
        }
    } else if (k == 3) {
        for (int i = 1; i * step <= 0.25 + 1e-15; ++i) {
            double d1 = i * step;
            if (d1 > budget) break;
            double h1 = h_u(kd * d1);
            for (int j = i; j * step <= 0.25 + 1e-15; ++j) {
                double d2 = j * step;
                if (d1 + d2 > budget) break;
                auto l = static_cast<int>(std::floor((budget - d1 - d2) / step + 1e-9));
                if (l < 1) continue;
                double d3 = std::min(l * step, 0.25);
                best = std::min(best, (h1 + h_u(kd * d2) + h_u(kd * d3)) / 3.0);
            }
        }
    }
    return best;
}

// ---- criterion 9 helpers ----------------------------------------------------

double cells_entropy_bits(const TwoIntervalCells& cells) {
    double total = 0.0;
    std::vector<double> lens;
    for (const auto& parts : cells) {
        double len = 0.0;
        for (const auto& c : parts) len += c.length();
        lens.push_back(len);
        total += len;
    }
    double h = 0.0;
    for (double len : lens)
        if (len > 0.0) {
            double p = len / total;
            h -= p * std::log2(p);
        }
    return h;
}

double numeric_median(const std::vector<Interval>& parts) {
    double total = 0.0;
    for (const auto& c : parts) total += c.length();
    auto mass_below = [&](double t) {
        double m = 0.0;
        for (const auto& c : parts) m += std::max(0.0, std::min(t, c.hi) - c.lo);
        return m;
    };
    double lo = parts.front().lo, hi = parts.back().hi;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mass_below(mid) < 0.5 * total)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double quadrature_scheme_distortion(const TwoIntervalCells& cells, int panels) {
    double total = 0.0, acc = 0.0;
    for (const auto& parts : cells) {
        double len = 0.0;
        for (const auto& c : parts) len += c.length();
        total += len;
        double t = numeric_median(parts);
        double integral = 0.0;
        for (const auto& c : parts) {
            int n = std::max(1, static_cast<int>(panels * c.length()));
            for (int i = 0; i < n; ++i) {
                double x = c.lo + (i + 0.5) * c.length() / n;
                integral += std::abs(x - t) * c.length() / n;
            }
        }
        acc += integral; // already length-weighted
    }
    return acc / total;
}

TwoIntervalCells random_two_interval_partition(double a, double b, double c,
                                               std::uint64_t seed) {
    std::vector<double> cuts{0.0, a, b, c};
    int extra = 2 + static_cast<int>(counter_u64(seed, 0) % 5);
    for (int i = 0; i < extra; ++i) {
        double u = counter_u01(seed, static_cast<std::uint64_t>(1 + i));
        double pos = u * (a + (c - b));
        cuts.push_back(pos <= a ? pos : b + (pos - a));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    int cell_count = 2 + static_cast<int>(counter_u64(seed, 50) % 5); // <= 6
    TwoIntervalCells cells(static_cast<std::size_t>(cell_count));
    std::size_t piece = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double lo = cuts[i], hi = cuts[i + 1];
        if (hi - lo <= 1e-12) continue;
        if (lo >= a - 1e-15 && hi <= b + 1e-15 && b > a) continue; // the gap
        auto cell = static_cast<std::size_t>(counter_u64(seed, 100 + piece) %
                                             static_cast<std::uint64_t>(cell_count));
        cells[cell].push_back({lo, hi});
        ++piece;
    }
    TwoIntervalCells out;
    for (auto& parts : cells)
        if (!parts.empty()) out.push_back(std::move(parts));
    return out;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---- criteria ----------------------------------------------------------------

bool criterion_knot_identities(std::string& detail) {
    for (std::int64_t n = 1; n <= 64; ++n) {
        const double delta = 0.25 / static_cast<double>(n);
        const double want = std::log2(static_cast<double>(n));
        if (std::abs(h_u(delta) - want) > 1e-9 ||
            std::abs(h_u_envelope(delta) - want) > 1e-9) {
            detail = "mismatch at N=" + std::to_string(n);
            return false;
        }
    }
    return true;
}

bool criterion_roundtrip(std::string& detail) {
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        double delta = counter_u01(2024, static_cast<std::uint64_t>(i)) * 0.25;
        if (delta <= 0.0) delta = 0.25;
        worst = std::max(worst, std::abs(distortion_of(solve_p(delta)) - delta));
    }
    detail = "max |roundtrip error| = " + std::to_string(worst);
    return worst <= 1e-10;
}

bool criterion_envelope_oracle(std::string& detail) {
    const double lo = 1.0 / 1024.0, hi = 0.25;
    std::vector<EDPoint> samples;
    samples.reserve(100000 + 256);
    for (int i = 0; i < 100000; ++i) {
        double d = lo + (hi - lo) * i / 99999.0;
        samples.push_back({d, h_u(d)});
    }
    for (std::int64_t n = 1; 0.25 / static_cast<double>(n) >= lo; ++n) {
        double d = 0.25 / static_cast<double>(n);
        samples.push_back({d, h_u(d)});
    }
    const auto hull = lower_hull(std::move(samples));
    double worst = 0.0;
    for (int i = 0; i < 20000; ++i) {
        double d = lo + (hi - lo) * i / 19999.0;
        worst = std::max(worst, std::abs(hull_value(hull, d) - h_u_envelope(d)));
    }
    detail = "max |hull - envelope| = " + std::to_string(worst);
    return worst <= 1e-6;
}

bool criterion_sandwich(std::string& detail) {
    for (std::int64_t k : {2, 4, 32}) {
        for (int i = 0; i < 200; ++i) {
            double delta = (1e-4 + (0.3 - 1e-4) * i / 199.0) / static_cast<double>(k);
            const auto a = solve_allocation(delta, k);
            if (a.cond_entropy_bits < lower_bound_q(delta, k) - 1e-9 ||
                a.cond_entropy_bits > upper_bound_q(delta, k) + 1e-9) {
                detail = "sandwich violated at K=" + std::to_string(k);
                return false;
            }
        }
    }
    double worst_gap = 0.0;
    for (std::int64_t k : {2, 3}) {
        for (int i = 0; i < 20; ++i) {
            double delta = (0.002 + 0.298 * counter_u01(99, static_cast<std::uint64_t>(
                                                                 20 * k + i))) /
                           static_cast<double>(k);
            const auto a = solve_allocation(delta, k);
            const double brute = brute_force_allocation(delta, k);
            worst_gap = std::max(worst_gap, a.cond_entropy_bits - brute);
            if (brute < lower_bound_q(delta, k) - 1e-9) {
                detail = "brute force dipped below the lower bound";
                return false;
            }
        }
    }
    detail = "max (solver - brute force) = " + std::to_string(worst_gap) + " bits";
    return worst_gap <= 0.02;
}

bool criterion_tight_points(std::string& detail) {
    const std::int64_t k = 4;
    for (std::int64_t n = 1; n <= 3; ++n)
        for (std::int64_t m = 0; m <= k; ++m) {
            const auto a = mixing_allocation(k, n, m);
            if (std::abs(a.cond_entropy_bits - lower_bound_q(a.mean_delta, k)) > 1e-9) {
                detail = "off the envelope at N=" + std::to_string(n) +
                         " M=" + std::to_string(m);
                return false;
            }
        }
    const auto spot = mixing_allocation(4, 1, 2);
    if (std::abs(spot.mean_delta - 3.0 / 64.0) > 1e-14 ||
        std::abs(spot.cond_entropy_bits - 0.5) > 1e-12) {
        detail = "(K=4,N=1,M=2) spot value off";
        return false;
    }
    return true;
}

bool criterion_achievable_spots(std::string& detail) {
    const auto a = achievable_point(0.5, 0.25);
    const auto b = achievable_point(1.0 / 3.0, 1.0 / 3.0);
    const double e1 = std::abs(a.delta - 1.0 / 24.0);
    const double e2 = std::abs(a.entropy_bits - 1.0);
    const double e3 = std::abs(b.delta - 5.0 / 144.0);
    const double e4 = std::abs(b.entropy_bits - std::log2(3.0));
    detail = "max error " + std::to_string(std::max({e1, e2, e3, e4}));
    return e1 <= 1e-12 && e2 <= 1e-12 && e3 <= 1e-12 && e4 <= 1e-12;
}

bool criterion_scheme_formula_agreement(std::string& detail) {
    int mc_hits = 0;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double alpha =
            0.05 + 0.45 * counter_u01(4242, static_cast<std::uint64_t>(2 * i));
        const double p =
            (1.0 - alpha) *
            (0.02 + 0.96 * counter_u01(4242, static_cast<std::uint64_t>(2 * i + 1)));
        const auto scheme = make_noisy_si_scheme(p, alpha);
        const auto pt = achievable_point(p, alpha);
        const auto ed = exact_eval(scheme);
        worst = std::max(worst, std::abs(ed.delta - pt.delta));
        if (std::abs(ed.delta - pt.delta) > 1e-9) {
            detail = "exact_eval disagrees with the closed form";
            return false;
        }
        const auto mc =
            monte_carlo_eval(scheme, 1000000, 1000 + static_cast<std::uint64_t>(i));
        if (std::abs(mc.delta_hat - ed.delta) <= 4.0 * mc.se_delta) ++mc_hits;
    }
    detail = "max formula gap " + std::to_string(worst) + ", MC within 4se: " +
             std::to_string(mc_hits) + "/50";
    return mc_hits >= 48;
}

bool criterion_model_coincidence(std::string& detail) {
    for (std::int64_t k : {4, 32}) {
        const double alpha = 1.0 / static_cast<double>(k);
        for (int i = 0; i < 200; ++i) {
            double delta = (1e-4 + (0.3 - 1e-4) * i / 199.0) / static_cast<double>(k);
            if (lower_bound_n(delta, alpha) != lower_bound_q(delta, k)) {
                detail = "bounds differ at K=" + std::to_string(k);
                return false;
            }
        }
    }
    return true;
}

bool criterion_merge_lemma(std::string& detail) {
    int done = 0;
    double worst_gap = 0.0, worst_quad = 0.0;
    for (std::uint64_t seed = 1; done < 1000; ++seed) {
        double a = 0.05 + 0.4 * counter_u01(seed, 9000);
        double b = a + (0.95 - a) * counter_u01(seed, 9001) * 0.8;
        double c = b + (1.0 - b) * (0.2 + 0.8 * counter_u01(seed, 9002));
        const auto cells = random_two_interval_partition(a, b, c, seed);
        if (cells.empty()) continue;
        ++done;
        const auto merged = merge_two_intervals(cells, a, b, c);
        if (std::abs(cells_entropy_bits(cells) - cells_entropy_bits(merged)) > 1e-12) {
            detail = "entropy not preserved";
            return false;
        }
        const double d0 = scheme_median_distortion(cells);
        const double d1 = scheme_median_distortion(merged);
        worst_gap = std::max(worst_gap, d1 - d0);
        if (d1 > d0 + 1e-12) {
            detail = "merge raised the distortion";
            return false;
        }
        worst_quad = std::max(
            {worst_quad, std::abs(d0 - quadrature_scheme_distortion(cells, 10000)),
             std::abs(d1 - quadrature_scheme_distortion(merged, 10000))});
        if (worst_quad > 1e-6) {
            detail = "closed form disagrees with quadrature";
            return false;
        }
    }
    detail = "max distortion increase " + std::to_string(worst_gap) +
             ", max quadrature gap " + std::to_string(worst_quad);
    return true;
}

bool criterion_fig2(std::string& detail) {
    for (std::int64_t k : {std::int64_t{4}, std::int64_t{32}}) {
        const auto data = fig2_data(k);
        for (const auto& row : data.table.rows) {
            const double p2p = row[1], lower = row[2], qup = row[3], nup = row[4];
            if (!(lower <= nup + 1e-9 && lower <= qup + 1e-9 && qup <= p2p + 1e-9 &&
                  nup <= p2p + 1e-9)) {
                detail = "curve ordering violated at K=" + std::to_string(k);
                return false;
            }
        }
        if (k == 4) {
            std::set<std::int64_t> regimes;
            for (const auto& pt : data.frontier)
                if (pt.delta >= data.delta_min && pt.delta <= data.delta_max)
                    regimes.insert(pt.bin_groups);
            if (regimes.size() < 2) {
                detail = "fewer than 2 bin-group regimes at alpha=1/4";
                return false;
            }
            detail = std::to_string(regimes.size()) + " regimes at alpha=1/4";
        }
    }
    const auto dir = std::filesystem::temp_directory_path() / "wz_acceptance_fig2";
    std::filesystem::create_directories(dir);
    const auto written = run_fig2((dir / "fig2.csv").string(), OutputFormat::csv);
    bool ok = written.size() == 2;
    for (const auto& path : written) ok = ok && std::filesystem::file_size(path) > 0;
    std::filesystem::remove_all(dir);
    if (!ok) detail = "fig2 files not written";
    return ok;
}

bool criterion_determinism(std::string& detail) {
    const auto dir = std::filesystem::temp_directory_path() / "wz_acceptance_det";
    std::filesystem::create_directories(dir);
    const auto out1 = dir / "sim1.json";
    const auto out2 = dir / "sim2.json";
    const std::string base = "\"" + g_cli_path +
                             "\" simulate --scheme noisy --p 0.5 --alpha 0.25 "
                             "--samples 200000 --seed 11 --format json --out ";
    if (std::system((base + "\"" + out1.string() + "\"").c_str()) != 0 ||
        std::system((base + "\"" + out2.string() + "\"").c_str()) != 0) {
        detail = "CLI invocation failed (" + g_cli_path + ")";
        return false;
    }
    const std::string b1 = slurp(out1);
    const std::string b2 = slurp(out2);
    std::filesystem::remove_all(dir);
    if (b1.empty() || b1 != b2) {
        detail = "outputs differ or are empty";
        return false;
    }
    detail = std::to_string(b1.size()) + " identical bytes";
    return true;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = argv[1];

    run_criterion(1, "knot identities h_u(1/(4N)) = log2 N, N = 1..64", 1.0,
                  criterion_knot_identities);
    run_criterion(2, "roundtrip |distortion_of(solve_p(d)) - d| <= 1e-10 on 10^4 draws",
                  1.0, criterion_roundtrip);
    run_criterion(3, "analytic envelope matches the 10^5-sample convex hull to 1e-6",
                  10.0, criterion_envelope_oracle);
    run_criterion(4, "allocation sandwich and 1/2048 simplex brute force within 0.02 bits",
                  120.0, criterion_sandwich);
    run_criterion(5, "K+1 tight points: mixing allocations sit on the lower bound", 1.0,
                  criterion_tight_points);
    run_criterion(6, "binned-scheme spot values (1/24, 1) and (5/144, log2 3)", 1.0,
                  criterion_achievable_spots);
    run_criterion(7, "scheme/formula agreement and Monte Carlo within 4 s.e. (48/50)",
                  300.0, criterion_scheme_formula_agreement);
    run_criterion(8, "noisy and quantized lower bounds identical for alpha = 1/K", 1.0,
                  criterion_model_coincidence);
    run_criterion(9, "two-interval merge: entropy preserved, distortion never rises",
                  30.0, criterion_merge_lemma);
    run_criterion(10, "fig2 preset curve orderings and bin-group regimes", 60.0,
                  criterion_fig2);
    run_criterion(11, "byte-identical simulate reports for identical configs", 60.0,
                  criterion_determinism);

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 11 criteria passed\n");
    return 0;
}
