#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wz/core_ed.hpp"

namespace wz {

/// Subinterval of [0,1].  Cells are closed-left/open-right; an interval
/// ending at 1 is closed there so the encoder is total.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return x >= lo && (x < hi || (hi == 1.0 && x <= hi)); }
};

/// Union of at most two disjoint intervals, sorted by lo.  Models the
/// conditional support of the source given a noisy side-information value,
/// which wraps around the unit interval near its ends.
struct IntervalSet {
    Interval parts[2];
    int count = 0;

    double total_length() const;
    bool contains(double x) const;
};

/// Support of the source given noisy side information y with noise width
/// alpha: an interval of length alpha centered at y, wrapped into [0,1].
IntervalSet side_info_support(double y, double alpha);

enum class SideInfoKind { none, quantized, noisy };

struct SideInfoModel {
    SideInfoKind kind = SideInfoKind::none;
    std::int64_t levels = 0; ///< K, quantized only
    double alpha = 0.0;      ///< noise width, noisy only

    static SideInfoModel none() { return {}; }
    static SideInfoModel quantized(std::int64_t k) { return {SideInfoKind::quantized, k, 0.0}; }
    static SideInfoModel noisy(double alpha) { return {SideInfoKind::noisy, 0, alpha}; }
};

enum class Reconstruction { midpoint_of_cell, midpoint_of_intersection };

/// Executable encoder/decoder pair: cells[i] is the set A_i mapped to
/// encoder index i (a union of disjoint intervals), and the reconstruction
/// rule says how the decoder places the estimate inside it.
struct Scheme {
    SideInfoModel model;
    std::vector<std::vector<Interval>> cells;
    Reconstruction reconstruction = Reconstruction::midpoint_of_cell;

    std::size_t index_count() const { return cells.size(); }

    /// Encoder: index of the cell containing x.  Total on [0,1].
    int encode(double x) const;

    /// Decoder without side information: midpoint of A_i.
    double reconstruct_p2p(int index) const;
    /// Decoder given quantized side information level (0-based).
    double reconstruct_quantized(int index, std::int64_t level) const;
    /// Decoder given noisy side information value y: midpoint of the
    /// intersection of A_i with the support of y.  Throws
    /// UndefinedDecoderError when that intersection is empty.
    double reconstruct_noisy(int index, double y) const;

    /// Partition and model-consistency checks; throws std::invalid_argument.
    void validate() const;

  private:
    friend Scheme finalize_scheme(SideInfoModel, std::vector<std::vector<Interval>>, Reconstruction);
    std::vector<double> flat_lo_;
    std::vector<Interval> flat_iv_;
    std::vector<int> flat_index_;
};

/// Assembles a Scheme from raw cells, builds the encoder lookup and
/// validates it.
Scheme finalize_scheme(SideInfoModel model, std::vector<std::vector<Interval>> cells,
                       Reconstruction reconstruction);

/// floor(1/p) cells of width p plus a residual cell, reconstruction at cell
/// midpoints.  The entropy/distortion-optimal point-to-point quantizer.
Scheme make_p2p_scheme(double p);

/// Within side-information level k the point-to-point scheme for
/// per_bin_p[k], rescaled to [(k-1)/K, k/K]; encoder indices are shared
/// across levels and the decoder resolves them with the level.
Scheme make_quantized_si_scheme(std::int64_t k_levels, std::span<const double> per_bin_p);

/// Binned periodic quantizer: the base partition of [0, 1/L] with cell
/// width p/L is repeated with period 1/L, so each index maps to L intervals
/// at least alpha apart; the decoder intersects with the side-information
/// support.  Requires 0 < p < 1 - alpha.
Scheme make_noisy_si_scheme(double p, double alpha);

/// Exact entropies from cell measures: the encoder-output entropy and, for
/// the quantized model, the conditional entropy given the level.
struct SchemeEntropies {
    double entropy_bits = 0.0;
    std::optional<double> cond_entropy_bits;
};
SchemeEntropies exact_entropies(const Scheme& scheme);

/// Closed-form entropy and expected L1 distortion of the scheme.  For the
/// quantized model the entropy reported is the conditional one (the
/// operative rate); for the noisy model the distortion integrates the
/// triangular/trapezoidal side-information density analytically per cell.
EDPoint exact_eval(const Scheme& scheme);

/// JSON round-trip; doubles rendered as 17-significant-digit decimal
/// strings so values survive exactly.
std::string scheme_to_json(const Scheme& scheme);
Scheme scheme_from_json(const std::string& text);
Scheme scheme_from_json_file(const std::string& path);

} // namespace wz
