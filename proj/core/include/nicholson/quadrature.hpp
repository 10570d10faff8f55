#pragma once

#include <cmath>

#include "nicholson/expr.hpp"

namespace nicholson {

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth, int min_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || (min_depth <= 0 && std::fabs(delta) <= 15.0 * tol)) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, min_depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, min_depth - 1);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction. min_depth forces an initial
/// subdivision so oscillatory integrands are not accepted on a coarse panel.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 40, int min_depth = 3) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth, min_depth);
}

/// Integral of expr over [a, b] to absolute tolerance tol.
[[nodiscard]] double integrate_expr(const TimeExpr& expr, double a, double b, double tol = 1e-10);

}  // namespace nicholson
