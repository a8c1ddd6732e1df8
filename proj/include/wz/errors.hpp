#pragma once

#include <stdexcept>
#include <string>

namespace wz {

/// Query below the resolution the analytic representation supports
/// (e.g. an envelope evaluation past the configured smallest knot).
struct ResolutionError : std::domain_error {
    explicit ResolutionError(const std::string& what) : std::domain_error(what) {}
};

/// A bound query that no point of the configured construction can answer.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// Decoder asked to reconstruct from an (index, side-info) pair whose
/// cell/support intersection is empty; the scheme and model disagree.
struct UndefinedDecoderError : std::runtime_error {
    explicit UndefinedDecoderError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace wz
