#include "wz/merge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wz {

namespace {

constexpr double kTol = 1e-12;

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

bool inside(const Interval& c, double lo, double hi) {
    return c.lo >= lo - kTol && c.hi <= hi + kTol;
}

} // namespace

double interval_median(const std::vector<Interval>& parts) {
    require(!parts.empty(), "median of an empty set");
    double total = 0.0;
    for (const auto& c : parts) total += c.length();
    require(total > 0.0, "median needs positive measure");
    double half = 0.5 * total;
    for (const auto& c : parts) {
        // When the half mass lands on a piece end (within noise) the median
        // set is a whole gap; clamping to the piece end takes its infimum.
        if (c.length() >= half - kTol) return std::min(c.lo + half, c.hi);
        half -= c.length();
    }
    return parts.back().hi;
}

double median_distortion(const std::vector<Interval>& parts) {
    const double t = interval_median(parts);
    double total = 0.0;
    double integral = 0.0;
    for (const auto& c : parts) {
        total += c.length();
        if (t <= c.lo)
            integral += c.length() * (c.midpoint() - t);
        else if (t >= c.hi)
            integral += c.length() * (t - c.midpoint());
        else
            integral += 0.5 * ((c.hi - t) * (c.hi - t) + (t - c.lo) * (t - c.lo));
    }
    return integral / total;
}

double scheme_median_distortion(const TwoIntervalCells& cells) {
    double total = 0.0;
    std::vector<double> lengths;
    lengths.reserve(cells.size());
    for (const auto& parts : cells) {
        double len = 0.0;
        for (const auto& c : parts) len += c.length();
        lengths.push_back(len);
        total += len;
    }
    require(total > 0.0, "cells have no measure");
    double d = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (lengths[i] > 0.0) d += (lengths[i] / total) * median_distortion(cells[i]);
    return d;
}

TwoIntervalCells merge_two_intervals(const TwoIntervalCells& cells, double a, double b, double c) {
    require(0.0 <= a && a <= b && b <= c && c <= 1.0, "need 0 <= a <= b <= c <= 1");
    const double shift = b - a;

    // The cells together must partition [0,a] u [b,c].
    std::vector<Interval> all;
    for (const auto& parts : cells)
        for (const auto& iv : parts) {
            require(iv.hi > iv.lo, "cell intervals must have positive length");
            require(inside(iv, 0.0, a) || inside(iv, b, c),
                    "cell interval does not lie in [0,a] u [b,c]");
            all.push_back(iv);
        }
    std::sort(all.begin(), all.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    double covered = 0.0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        covered += all[i].length();
        if (i > 0) require(all[i].lo >= all[i - 1].hi - kTol, "cell intervals overlap");
    }
    require(std::abs(covered - (a + (c - b))) <= 1e-9, "cells must cover [0,a] u [b,c]");

    TwoIntervalCells merged;
    merged.reserve(cells.size());
    for (const auto& parts : cells) {
        std::vector<Interval> sorted = parts;
        std::sort(sorted.begin(), sorted.end(),
                  [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
        std::vector<Interval> out;
        for (const auto& iv : sorted) {
            Interval moved = inside(iv, 0.0, a) ? iv : Interval{iv.lo - shift, iv.hi - shift};
            if (!out.empty() && std::abs(moved.lo - out.back().hi) <= kTol)
                out.back().hi = moved.hi; // the shift made the pieces abut
            else
                out.push_back(moved);
        }
        merged.push_back(std::move(out));
    }
    return merged;
}

} // namespace wz
