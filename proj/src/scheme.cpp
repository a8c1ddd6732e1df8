#include "wz/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace wz {

namespace {

constexpr double kGeomTol = 1e-12;

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

void check(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

} // namespace

double IntervalSet::total_length() const {
    double t = 0.0;
    for (int i = 0; i < count; ++i) t += parts[i].length();
    return t;
}

bool IntervalSet::contains(double x) const {
    for (int i = 0; i < count; ++i)
        if (x >= parts[i].lo && x <= parts[i].hi) return true;
    return false;
}

IntervalSet side_info_support(double y, double alpha) {
    require(y >= 0.0 && y <= 1.0, "side information value must be in [0, 1]");
    require(alpha > 0.0 && alpha <= 0.5, "noise width must be in (0, 1/2]");
    const double half = 0.5 * alpha;
    IntervalSet set;
    if (y >= half && y <= 1.0 - half) {
        set.parts[0] = {y - half, y + half};
        set.count = 1;
    } else if (y > 1.0 - half) {
        // Wraps past 1: [0, y+alpha/2-1] u [y-alpha/2, 1].
        set.parts[0] = {0.0, y + half - 1.0};
        set.parts[1] = {y - half, 1.0};
        set.count = 2;
    } else {
        // Wraps past 0: [0, y+alpha/2] u [y-alpha/2+1, 1].
        set.parts[0] = {0.0, y + half};
        set.parts[1] = {y - half + 1.0, 1.0};
        set.count = 2;
    }
    return set;
}

namespace {

// Cell boundaries of the width-p partition of [0,1]; a residual sliver
// below kGeomTol is absorbed into the last full cell.
std::vector<double> unit_boundaries(double p) {
    const CellParameter cp = CellParameter::from_width(p);
    std::vector<double> b;
    b.reserve(static_cast<std::size_t>(cp.n_full) + 2);
    b.push_back(0.0);
    for (std::int64_t i = 1; i <= cp.n_full; ++i)
        b.push_back(static_cast<double>(i) * p);
    if (cp.q > kGeomTol)
        b.push_back(1.0);
    else
        b.back() = 1.0;
    return b;
}

} // namespace

int Scheme::encode(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("encoder input must be in [0, 1]");
    if (flat_lo_.empty()) throw std::logic_error("scheme was not built by finalize_scheme");
    auto it = std::upper_bound(flat_lo_.begin(), flat_lo_.end(), x);
    auto pos = static_cast<std::size_t>(std::distance(flat_lo_.begin(), it));
    if (pos == 0) return flat_index_.front();
    return flat_index_[pos - 1];
}

double Scheme::reconstruct_p2p(int index) const {
    const auto& parts = cells.at(static_cast<std::size_t>(index));
    return parts.front().midpoint();
}

double Scheme::reconstruct_quantized(int index, std::int64_t level) const {
    const double lo = static_cast<double>(level) / static_cast<double>(model.levels);
    const double hi = static_cast<double>(level + 1) / static_cast<double>(model.levels);
    for (const auto& c : cells.at(static_cast<std::size_t>(index)))
        if (c.lo >= lo - kGeomTol && c.hi <= hi + kGeomTol) return c.midpoint();
    throw UndefinedDecoderError("no cell for this (index, level) pair");
}

double Scheme::reconstruct_noisy(int index, double y) const {
    const IntervalSet support = side_info_support(y, model.alpha);
    bool found = false;
    Interval best{0.0, 0.0};
    for (const auto& c : cells.at(static_cast<std::size_t>(index))) {
        for (int k = 0; k < support.count; ++k) {
            const double lo = std::max(c.lo, support.parts[k].lo);
            const double hi = std::min(c.hi, support.parts[k].hi);
            if (hi < lo) continue;
            if (hi - lo > 0.0 && found && best.length() > 0.0)
                throw UndefinedDecoderError(
                    "side-information support meets several cell pieces; scheme and model disagree");
            if (!found || hi - lo > best.length()) best = {lo, hi};
            found = true;
        }
    }
    if (!found)
        throw UndefinedDecoderError("side-information support misses the cell entirely");
    return best.midpoint();
}

void Scheme::validate() const {
    check(!cells.empty(), "scheme has no cells");
    std::vector<Interval> flat;
    for (const auto& parts : cells) {
        check(!parts.empty(), "every encoder index needs at least one interval");
        for (std::size_t j = 0; j < parts.size(); ++j) {
            const auto& c = parts[j];
            check(c.lo >= -kGeomTol && c.hi <= 1.0 + kGeomTol && c.lo < c.hi,
                  "cell intervals must be nondegenerate subintervals of [0, 1]");
            if (j > 0) check(c.lo >= parts[j - 1].hi - kGeomTol, "per-index intervals must be sorted and disjoint");
            flat.push_back(c);
        }
    }
    std::sort(flat.begin(), flat.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    check(std::abs(flat.front().lo) <= kGeomTol, "partition must start at 0");
    check(std::abs(flat.back().hi - 1.0) <= kGeomTol, "partition must end at 1");
    double total = 0.0;
    for (std::size_t i = 0; i < flat.size(); ++i) {
        total += flat[i].length();
        if (i > 0) check(std::abs(flat[i].lo - flat[i - 1].hi) <= kGeomTol, "cells must tile [0, 1] without gaps or overlaps");
    }
    check(std::abs(total - 1.0) <= 1e-9, "cell measures must sum to 1");

    if (model.kind == SideInfoKind::quantized) {
        check(model.levels >= 1, "quantized model needs at least one level");
        const double kd = static_cast<double>(model.levels);
        for (const auto& parts : cells)
            for (const auto& c : parts) {
                auto level = static_cast<std::int64_t>(std::floor(c.midpoint() * kd));
                check(c.lo >= static_cast<double>(level) / kd - kGeomTol &&
                          c.hi <= static_cast<double>(level + 1) / kd + kGeomTol,
                      "quantized cells must not straddle level boundaries");
            }
    }
    if (model.kind == SideInfoKind::noisy) {
        check(model.alpha > 0.0 && model.alpha <= 0.5, "noise width must be in (0, 1/2]");
        const double min_gap = model.alpha - 1e-9;
        for (const auto& parts : cells) {
            if (parts.size() < 2) continue;
            for (std::size_t j = 1; j < parts.size(); ++j)
                check(parts[j].lo - parts[j - 1].hi >= min_gap,
                      "same-index intervals must sit at least alpha apart");
            check(parts.front().lo + 1.0 - parts.back().hi >= min_gap,
                  "same-index intervals must sit at least alpha apart around the wrap");
        }
    }
}

Scheme finalize_scheme(SideInfoModel model, std::vector<std::vector<Interval>> cells,
                       Reconstruction reconstruction) {
    Scheme s;
    s.model = model;
    s.cells = std::move(cells);
    s.reconstruction = reconstruction;
    s.validate();

    struct Entry {
        Interval iv;
        int index;
    };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < s.cells.size(); ++i)
        for (const auto& c : s.cells[i]) entries.push_back({c, static_cast<int>(i)});
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.iv.lo < b.iv.lo; });
    for (const auto& e : entries) {
        s.flat_lo_.push_back(e.iv.lo);
        s.flat_iv_.push_back(e.iv);
        s.flat_index_.push_back(e.index);
    }
    return s;
}

Scheme make_p2p_scheme(double p) {
    const auto b = unit_boundaries(p);
    std::vector<std::vector<Interval>> cells;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) cells.push_back({Interval{b[i], b[i + 1]}});
    return finalize_scheme(SideInfoModel::none(), std::move(cells),
                           Reconstruction::midpoint_of_cell);
}

Scheme make_quantized_si_scheme(std::int64_t k_levels, std::span<const double> per_bin_p) {
    require(k_levels >= 1, "level count must be positive");
    require(static_cast<std::int64_t>(per_bin_p.size()) == k_levels,
            "one cell width per side-information level is required");
    const double kd = static_cast<double>(k_levels);
    std::vector<std::vector<Interval>> cells;
    for (std::int64_t k = 0; k < k_levels; ++k) {
        const auto local = unit_boundaries(per_bin_p[static_cast<std::size_t>(k)]);
        for (std::size_t i = 0; i + 1 < local.size(); ++i) {
            Interval iv{(static_cast<double>(k) + local[i]) / kd,
                        (static_cast<double>(k) + local[i + 1]) / kd};
            if (cells.size() <= i) cells.resize(i + 1);
            cells[i].push_back(iv);
        }
    }
    return finalize_scheme(SideInfoModel::quantized(k_levels), std::move(cells),
                           Reconstruction::midpoint_of_intersection);
}

Scheme make_noisy_si_scheme(double p, double alpha) {
    require(alpha > 0.0 && alpha <= 0.5, "noise width must be in (0, 1/2]");
    require(p > 0.0, "cell width must be positive");
    if (p >= 1.0 - alpha)
        throw std::domain_error("cell width must be below 1 - alpha (no room for a bin group)");
    auto l = static_cast<std::int64_t>(std::floor((1.0 - p) / alpha));
    while (static_cast<double>(l + 1) * alpha <= 1.0 - p) ++l;
    while (l > 1 && static_cast<double>(l) * alpha > 1.0 - p) --l;
    const double ld = static_cast<double>(l);

    const auto local = unit_boundaries(p);
    std::vector<std::vector<Interval>> cells(local.size() - 1);
    for (std::int64_t period = 0; period < l; ++period) {
        for (std::size_t i = 0; i + 1 < local.size(); ++i) {
            cells[i].push_back({(static_cast<double>(period) + local[i]) / ld,
                                (static_cast<double>(period) + local[i + 1]) / ld});
        }
    }
    return finalize_scheme(SideInfoModel::noisy(alpha), std::move(cells),
                           Reconstruction::midpoint_of_intersection);
}

namespace {

double plug_in_entropy(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

} // namespace

SchemeEntropies exact_entropies(const Scheme& scheme) {
    SchemeEntropies out;
    std::vector<double> probs;
    probs.reserve(scheme.cells.size());
    for (const auto& parts : scheme.cells) {
        double p = 0.0;
        for (const auto& c : parts) p += c.length();
        probs.push_back(p);
    }
    out.entropy_bits = plug_in_entropy(probs);

    if (scheme.model.kind == SideInfoKind::quantized) {
        const auto k_levels = scheme.model.levels;
        const double kd = static_cast<double>(k_levels);
        std::vector<std::vector<double>> per_level(static_cast<std::size_t>(k_levels));
        for (const auto& parts : scheme.cells)
            for (const auto& c : parts) {
                auto level = static_cast<std::size_t>(std::floor(c.midpoint() * kd));
                per_level[level].push_back(c.length() * kd);
            }
        double h = 0.0;
        for (const auto& probs_k : per_level) h += plug_in_entropy(probs_k);
        out.cond_entropy_bits = h / kd;
    }
    return out;
}

EDPoint exact_eval(const Scheme& scheme) {
    const SchemeEntropies ent = exact_entropies(scheme);
    EDPoint pt;
    pt.entropy_bits = ent.cond_entropy_bits.value_or(ent.entropy_bits);

    double delta = 0.0;
    if (scheme.model.kind == SideInfoKind::noisy) {
        // Per cell of width w, the distortion given the side information is
        // m/4 - m^3/(12*alpha*w) with m = min(w, alpha): the decoder sees
        // the overlap of the cell with the length-alpha support, and the
        // conditional estimate is its midpoint.
        const double alpha = scheme.model.alpha;
        for (const auto& parts : scheme.cells)
            for (const auto& c : parts) {
                const double w = c.length();
                const double m = std::min(w, alpha);
                delta += w * (m * 0.25) - m * m * m / (12.0 * alpha);
            }
    } else {
        for (const auto& parts : scheme.cells)
            for (const auto& c : parts) {
                const double w = c.length();
                delta += w * w * 0.25;
            }
    }
    pt.delta = delta;
    return pt;
}

namespace {

std::string dstr(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const nlohmann::json& j, const char* what) {
    if (j.is_string()) return std::stod(j.get<std::string>());
    if (j.is_number()) return j.get<double>();
    throw std::invalid_argument(std::string("expected a number for ") + what);
}

} // namespace

std::string scheme_to_json(const Scheme& scheme) {
    nlohmann::json j;
    j["format"] = "wz-scheme/1";
    switch (scheme.model.kind) {
        case SideInfoKind::none:
            j["model"] = "none";
            j["alpha_or_k"] = nullptr;
            break;
        case SideInfoKind::quantized:
            j["model"] = "quantized";
            j["alpha_or_k"] = scheme.model.levels;
            break;
        case SideInfoKind::noisy:
            j["model"] = "noisy";
            j["alpha_or_k"] = dstr(scheme.model.alpha);
            break;
    }
    j["reconstruction"] = scheme.reconstruction == Reconstruction::midpoint_of_cell
                              ? "midpoint_of_cell"
                              : "midpoint_of_intersection";
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& parts : scheme.cells) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& c : parts) row.push_back({dstr(c.lo), dstr(c.hi)});
        cells.push_back(std::move(row));
    }
    j["cells"] = std::move(cells);
    return j.dump(2) + "\n";
}

Scheme scheme_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    const std::string model_name = j.at("model").get<std::string>();
    SideInfoModel model;
    if (model_name == "none") {
        model = SideInfoModel::none();
    } else if (model_name == "quantized") {
        model = SideInfoModel::quantized(j.at("alpha_or_k").get<std::int64_t>());
    } else if (model_name == "noisy") {
        model = SideInfoModel::noisy(parse_double(j.at("alpha_or_k"), "alpha"));
    } else {
        throw std::invalid_argument("unknown side-information model: " + model_name);
    }
    const std::string rec = j.at("reconstruction").get<std::string>();
    Reconstruction reconstruction;
    if (rec == "midpoint_of_cell")
        reconstruction = Reconstruction::midpoint_of_cell;
    else if (rec == "midpoint_of_intersection")
        reconstruction = Reconstruction::midpoint_of_intersection;
    else
        throw std::invalid_argument("unknown reconstruction rule: " + rec);

    std::vector<std::vector<Interval>> cells;
    for (const auto& row : j.at("cells")) {
        std::vector<Interval> parts;
        for (const auto& pair : row) {
            if (!pair.is_array() || pair.size() != 2)
                throw std::invalid_argument("cell intervals must be [lo, hi] pairs");
            parts.push_back({parse_double(pair[0], "interval lo"), parse_double(pair[1], "interval hi")});
        }
        cells.push_back(std::move(parts));
    }
    return finalize_scheme(model, std::move(cells), reconstruction);
}

Scheme scheme_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scheme file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scheme_from_json(buf.str());
}

} // namespace wz
