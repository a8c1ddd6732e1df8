#include "wz/monte_carlo.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace wz {

std::uint64_t counter_u64(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double counter_u01(std::uint64_t seed, std::uint64_t index) {
    return static_cast<double>(counter_u64(seed, index) >> 11) * 0x1.0p-53;
}

McEstimate monte_carlo_eval(const Scheme& scheme, std::int64_t n_samples, std::uint64_t seed) {
    if (n_samples < 1000)
        throw std::domain_error("monte_carlo_eval needs at least 1000 samples");

    const auto kind = scheme.model.kind;
    const double kd = static_cast<double>(scheme.model.levels);

    std::vector<std::int64_t> index_counts(scheme.index_count(), 0);
    std::vector<std::int64_t> level_index_counts;
    if (kind == SideInfoKind::quantized)
        level_index_counts.assign(static_cast<std::size_t>(scheme.model.levels) *
                                      scheme.index_count(),
                                  0);

    // Welford accumulation keeps the variance single-pass and deterministic.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::int64_t j = 0; j < n_samples; ++j) {
        const double x = counter_u01(seed, static_cast<std::uint64_t>(2 * j));
        const int index = scheme.encode(x);
        double xhat = 0.0;
        switch (kind) {
            case SideInfoKind::none:
                xhat = scheme.reconstruct_p2p(index);
                break;
            case SideInfoKind::quantized: {
                auto level = static_cast<std::int64_t>(std::floor(x * kd));
                if (level >= scheme.model.levels) level = scheme.model.levels - 1;
                xhat = scheme.reconstruct_quantized(index, level);
                level_index_counts[static_cast<std::size_t>(level) * scheme.index_count() +
                                   static_cast<std::size_t>(index)]++;
                break;
            }
            case SideInfoKind::noisy: {
                const double z =
                    (counter_u01(seed, static_cast<std::uint64_t>(2 * j + 1)) - 0.5) *
                    scheme.model.alpha;
                double y = x + z;
                y -= std::floor(y);
                xhat = scheme.reconstruct_noisy(index, y);
                break;
            }
        }
        index_counts[static_cast<std::size_t>(index)]++;
        const double d = std::abs(x - xhat);
        const double delta1 = d - mean;
        mean += delta1 / static_cast<double>(j + 1);
        m2 += delta1 * (d - mean);
    }

    McEstimate est;
    est.n_samples = n_samples;
    est.seed = seed;
    est.delta_hat = mean;
    const double nd = static_cast<double>(n_samples);
    est.se_delta = n_samples > 1 ? std::sqrt(m2 / (nd * (nd - 1.0))) : 0.0;

    double h = 0.0;
    for (std::int64_t c : index_counts)
        if (c > 0) {
            const double p = static_cast<double>(c) / nd;
            h -= p * std::log2(p);
        }
    est.entropy_bits_hat = h;

    if (kind == SideInfoKind::quantized) {
        double hc = 0.0;
        for (std::int64_t level = 0; level < scheme.model.levels; ++level) {
            std::int64_t level_total = 0;
            for (std::size_t i = 0; i < scheme.index_count(); ++i)
                level_total += level_index_counts[static_cast<std::size_t>(level) *
                                                      scheme.index_count() +
                                                  i];
            if (level_total == 0) continue;
            const double pl = static_cast<double>(level_total) / nd;
            double hl = 0.0;
            for (std::size_t i = 0; i < scheme.index_count(); ++i) {
                const std::int64_t c = level_index_counts[static_cast<std::size_t>(level) *
                                                              scheme.index_count() +
                                                          i];
                if (c == 0) continue;
                const double p = static_cast<double>(c) / static_cast<double>(level_total);
                hl -= p * std::log2(p);
            }
            hc += pl * hl;
        }
        est.cond_entropy_bits_hat = hc;
    }
    return est;
}

} // namespace wz
