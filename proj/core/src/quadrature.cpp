#include "nicholson/quadrature.hpp"

namespace nicholson {

double integrate_expr(const TimeExpr& expr, double a, double b, double tol) {
    if (auto c = expr.constant_value()) return *c * (b - a);
    return adaptive_simpson([&](double s) { return expr.eval(s); }, a, b, tol);
}

}  // namespace nicholson
