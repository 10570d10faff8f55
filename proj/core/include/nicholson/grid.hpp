#pragma once

#include <cstddef>
#include <vector>

namespace nicholson {

/// n equally spaced points from lo to hi inclusive (hi may be below lo).
[[nodiscard]] std::vector<double> linspace(double lo, double hi, std::size_t n);

/// n sorted points on [lo, hi]: half equally spaced, half geometrically
/// clustered toward lo. Used when hi/lo spans many orders of magnitude
/// (permanence upper bounds can be astronomically large) so that the region
/// near lo is still resolved. Requires 0 < lo <= hi.
[[nodiscard]] std::vector<double> mixed_grid(double lo, double hi, std::size_t n);

}  // namespace nicholson
