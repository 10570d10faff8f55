#pragma once

// Nonautonomous Nicholson blowflies model with m pairs of time-varying delays:
//
//   x'(t) = beta(t) * ( sum_j p_j x(t - tau_j(t)) exp(-a_j x(t - sigma_j(t))) - delta x(t) )
//
// together with its standing-assumption checks and the linearisation about
// the positive equilibrium.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nicholson/expr.hpp"

namespace nicholson {

struct DelayPair {
    double p = 0.0;  ///< recruitment coefficient
    double a = 0.0;  ///< crowding decay rate
    TimeExpr tau;    ///< delay of the recruited population
    TimeExpr sigma;  ///< delay inside the crowding exponential
};

struct NicholsonModel {
    double delta = 0.0;  ///< mortality rate
    TimeExpr beta;       ///< time scaling, bounded below by a positive constant
    std::vector<DelayPair> pairs;
    double t0 = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return pairs.size(); }
    /// Sum of the p_j.
    [[nodiscard]] double total_recruitment() const noexcept;
};

/// Exact analytic values supplied by the user. Each one present replaces the
/// corresponding sampled estimate.
struct BoundOverrides {
    std::optional<double> beta_inf;
    std::optional<double> beta_sup;
    std::optional<double> tau_max;
    std::optional<double> zeta_M;
};

struct Aggregates {
    double p = 0.0;        ///< sum of p_j
    double a_plus = 0.0;   ///< max a_j
    double a_minus = 0.0;  ///< min a_j
    double tau_max = 0.0;  ///< sup over all tau_j and sigma_j
    double beta_plus = 0.0;
    double beta_minus = 0.0;
    bool beta_sampled = true;  ///< false when both beta bounds came from overrides
    bool tau_sampled = true;
};

struct ValidationReport {
    std::vector<std::string> violations;
    Aggregates aggregates;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> violations);
    [[nodiscard]] const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

inline constexpr std::size_t kDefaultValidationSamples = 20001;

/// 200 * (1 + tau_max), with tau_max roughly estimated on [t0, t0 + 200].
[[nodiscard]] double default_validation_horizon(const NicholsonModel& model);

/// Checks positivity of delta, p_j, a_j; sampled nonnegativity and finiteness
/// of the delays and a positive sampled lower bound of beta on
/// [t0, t0 + horizon]. Overrides are honoured and cross-checked against the
/// samples.
[[nodiscard]] ValidationReport validate(const NicholsonModel& model, double horizon,
                                        std::size_t n, const BoundOverrides& overrides = {});
[[nodiscard]] ValidationReport validate(const NicholsonModel& model,
                                        const BoundOverrides& overrides = {});

/// validate() with defaults; throws ValidationError listing every violation.
Aggregates require_valid(const NicholsonModel& model, const BoundOverrides& overrides = {});

struct InitialHistory {
    TimeExpr phi;
};

/// Admissibility of the history on [t0 - tau_max, t0]: phi >= 0 on the
/// sampled points before t0 and phi(t0) > 0. Returns the violations.
[[nodiscard]] std::vector<std::string> validate_history(const InitialHistory& history, double t0,
                                                        double tau_max, std::size_t n = 2001);

struct DelayedState {
    double x_tau;
    double x_sigma;
};

/// Right-hand side for given current and delayed states (one entry per pair).
[[nodiscard]] double rhs(const NicholsonModel& model, double t, double x_now,
                         std::span<const DelayedState> delayed);

/// u'(t) = -beta(t) * sum_k coefficient_k * u(t - lag_k(t)).
struct LinearTerm {
    enum class Lag { None, Tau, Sigma };

    double coefficient = 0.0;
    Lag lag = Lag::None;
    std::size_t pair = 0;  ///< meaningful for Tau and Sigma lags
    TimeExpr delay;        ///< zero for Lag::None
};

struct LinearDelayModel {
    TimeExpr beta;
    double t0 = 0.0;
    double K = 0.0;
    /// terms[0] is the undelayed mortality term, then the m tau terms, then
    /// the m sigma terms.
    std::vector<LinearTerm> terms;

    [[nodiscard]] std::size_t pair_count() const noexcept { return (terms.size() - 1) / 2; }
};

[[nodiscard]] LinearDelayModel linearize(const NicholsonModel& model, double K);

/// lagged[k] = u(t - delay_k(t)) for every term (lagged[0] is u(t) itself).
[[nodiscard]] double rhs(const LinearDelayModel& model, double t, std::span<const double> lagged);

}  // namespace nicholson
