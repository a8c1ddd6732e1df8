#pragma once

#include <cstdint>
#include <optional>

#include "wz/scheme.hpp"

namespace wz {

/// Counter-based generator: every output is a pure function of
/// (seed, stream index), so disjoint index ranges can be sampled
/// independently and the whole stream is reproducible by construction.
/// The mixer is the SplitMix64 finalizer applied at seed + (i+1)*gamma.
inline constexpr const char* kRngVersion = "splitmix64-counter/1";

std::uint64_t counter_u64(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [0, 1) from the top 53 bits of counter_u64.
double counter_u01(std::uint64_t seed, std::uint64_t index);

/// Monte Carlo point estimates for one scheme.
struct McEstimate {
    double entropy_bits_hat = 0.0;
    std::optional<double> cond_entropy_bits_hat; ///< quantized model only
    double delta_hat = 0.0;
    double se_delta = 0.0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
};

/// Draws the source (and noise, when the model needs it) from the counter
/// generator, runs the scheme's encoder and decoder, and returns plug-in
/// entropy and distortion estimates.  Deterministic in (scheme, n, seed).
/// Each sample consumes two stream indices regardless of model.
McEstimate monte_carlo_eval(const Scheme& scheme, std::int64_t n_samples, std::uint64_t seed);

} // namespace wz
