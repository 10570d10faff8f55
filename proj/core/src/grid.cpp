#include "nicholson/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nicholson {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) return {};
    if (n == 1) return {lo};
    std::vector<double> pts(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) pts[i] = lo + step * static_cast<double>(i);
    pts.back() = hi;
    return pts;
}

std::vector<double> mixed_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || hi < lo) throw std::invalid_argument("mixed_grid: require 0 < lo <= hi");
    if (n < 4 || hi / lo < 10.0) return linspace(lo, hi, n);
    const std::size_t n_geo = n / 2;
    std::vector<double> pts = linspace(lo, hi, n - n_geo);
    const double log_lo = std::log(lo);
    const double log_hi = std::log(hi);
    // Interior geometric points only; endpoints are already present.
    for (std::size_t i = 1; i <= n_geo; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(n_geo + 1);
        pts.push_back(std::exp(log_lo + frac * (log_hi - log_lo)));
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

}  // namespace nicholson
