#pragma once

#include <vector>

#include "wz/scheme.hpp"

namespace wz {

/// Cells partitioning the two-piece domain [0,a] u [b,c], each cell a union
/// of disjoint intervals.
using TwoIntervalCells = std::vector<std::vector<Interval>>;

/// Slides the [b,c] half of the domain left by b-a so the support becomes
/// the single interval [0, a+c-b]; every cell keeps its measure (and so its
/// index probability) exactly.  Median-decoder distortion never increases
/// under this transformation.
TwoIntervalCells merge_two_intervals(const TwoIntervalCells& cells, double a, double b, double c);

/// Infimum of the median set of the uniform distribution on the union of
/// the (sorted, disjoint) intervals.  Any median gives the same L1 loss.
double interval_median(const std::vector<Interval>& parts);

/// E|X - median| for X uniform on the union of the intervals, closed form.
double median_distortion(const std::vector<Interval>& parts);

/// Sum over cells of P(cell) * E|X - median(cell)|, with P relative to the
/// total measure of all cells.
double scheme_median_distortion(const TwoIntervalCells& cells);

} // namespace wz
