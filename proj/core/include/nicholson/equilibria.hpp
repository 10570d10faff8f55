#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nicholson/model.hpp"

namespace nicholson {

/// f(x) = (1/delta) * sum_j p_j exp(-a_j x), the recruitment-to-mortality
/// ratio at a constant state x. Strictly decreasing; f(K) = 1 at the
/// carrying capacity.
class Recruitment {
public:
    struct Term {
        double p;
        double a;
    };

    Recruitment(double delta, std::vector<Term> terms);
    explicit Recruitment(const NicholsonModel& model);

    [[nodiscard]] double value(double x) const { return derivative(x, 0); }
    /// k-th derivative, (1/delta) sum_j p_j (-a_j)^k exp(-a_j x), k in 0..3.
    [[nodiscard]] double derivative(double x, int order) const;

    [[nodiscard]] double delta() const noexcept { return delta_; }
    [[nodiscard]] std::span<const Term> terms() const noexcept { return terms_; }
    [[nodiscard]] double total() const noexcept;  ///< sum of p_j
    [[nodiscard]] double a_plus() const noexcept;
    [[nodiscard]] double a_minus() const noexcept;

private:
    double delta_;
    std::vector<Term> terms_;
};

[[nodiscard]] double f_eval(const NicholsonModel& model, double x, int order);

struct EquilibriumResult {
    double K = 0.0;
    double residual = 0.0;  ///< |f(K) - 1|
    std::size_t iterations = 0;
    std::optional<double> closed_form;  ///< log(p/delta)/a, single pair only
};

/// Raised when sum_j p_j <= delta: no positive equilibrium, extinction regime.
class NoPositiveEquilibrium : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unique root of f(K) = 1 by bracketing ([0, x_hi] with x_hi doubled from 1)
/// and bisection carried to full double precision (at most 200 halvings).
[[nodiscard]] EquilibriumResult carrying_capacity(const Recruitment& f);
[[nodiscard]] EquilibriumResult carrying_capacity(const NicholsonModel& model);

}  // namespace nicholson
