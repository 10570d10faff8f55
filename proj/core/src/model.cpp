#include "nicholson/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nicholson {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += "; ";
        out += s;
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// Slack for comparing an exact override against samples of the same quantity.
double slack(double scale) { return 1e-9 * std::max(1.0, std::fabs(scale)); }

}  // namespace

double NicholsonModel::total_recruitment() const noexcept {
    double p = 0.0;
    for (const auto& pair : pairs) p += pair.p;
    return p;
}

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

double default_validation_horizon(const NicholsonModel& model) {
    double tau = 0.0;
    for (const auto& pair : model.pairs) {
        try {
            tau = std::max(tau, sample_bounds(pair.tau, model.t0, model.t0 + 200.0, 2001).hi);
            tau = std::max(tau, sample_bounds(pair.sigma, model.t0, model.t0 + 200.0, 2001).hi);
        } catch (const DomainError&) {
            // reported properly by validate()
        }
    }
    return 200.0 * (1.0 + tau);
}

ValidationReport validate(const NicholsonModel& model, double horizon, std::size_t n,
                          const BoundOverrides& overrides) {
    if (!(horizon > 0.0)) throw std::invalid_argument("validate: horizon must be positive");
    ValidationReport report;
    auto& v = report.violations;
    auto& agg = report.aggregates;

    if (!(model.delta > 0.0)) v.push_back("delta must be positive (delta = " + fmt(model.delta) + ")");
    if (model.pairs.empty()) v.push_back("at least one delay pair is required");

    agg.p = model.total_recruitment();
    agg.a_plus = model.pairs.empty() ? kNaN : -std::numeric_limits<double>::infinity();
    agg.a_minus = model.pairs.empty() ? kNaN : std::numeric_limits<double>::infinity();

    const double t_lo = model.t0;
    const double t_hi = model.t0 + horizon;
    double tau_sampled = 0.0;
    bool tau_ok = true;

    for (std::size_t j = 0; j < model.pairs.size(); ++j) {
        const auto& pair = model.pairs[j];
        const std::string tag = "pair " + std::to_string(j + 1);
        if (!(pair.p > 0.0)) v.push_back("p_j must be positive (" + tag + ": p = " + fmt(pair.p) + ")");
        if (!(pair.a > 0.0)) v.push_back("a_j must be positive (" + tag + ": a = " + fmt(pair.a) + ")");
        agg.a_plus = std::max(agg.a_plus, pair.a);
        agg.a_minus = std::min(agg.a_minus, pair.a);

        auto check_delay = [&](const TimeExpr& d, const char* name) {
            try {
                const auto r = sample_bounds(d, t_lo, t_hi, n);
                if (r.lo < 0.0) {
                    v.push_back(std::string(name) + " must be nonnegative (" + tag +
                                ": sampled minimum " + fmt(r.lo) + ")");
                }
                tau_sampled = std::max(tau_sampled, r.hi);
            } catch (const DomainError& e) {
                tau_ok = false;
                v.push_back(std::string(name) + " must be bounded and defined (" + tag + ": " +
                            e.what() + ")");
            }
        };
        check_delay(pair.tau, "tau_j");
        check_delay(pair.sigma, "sigma_j");
    }

    agg.tau_max = tau_ok ? tau_sampled : kNaN;
    agg.tau_sampled = !overrides.tau_max.has_value();
    if (overrides.tau_max) {
        const double tau = *overrides.tau_max;
        if (!(tau >= 0.0)) {
            v.push_back("tau_max override must be nonnegative");
        } else if (tau_ok && tau < tau_sampled - slack(tau_sampled)) {
            v.push_back("tau_max override " + fmt(tau) + " is below the sampled delay maximum " +
                        fmt(tau_sampled));
        }
        agg.tau_max = tau;
    }

    double beta_lo = kNaN;
    double beta_hi = kNaN;
    try {
        const auto r = sample_bounds(model.beta, t_lo, t_hi, n);
        beta_lo = r.lo;
        beta_hi = r.hi;
    } catch (const DomainError& e) {
        v.push_back(std::string("β must be bounded and defined (") + e.what() + ")");
    }
    if (overrides.beta_inf) {
        if (std::isfinite(beta_lo) && *overrides.beta_inf > beta_lo + slack(beta_lo)) {
            v.push_back("beta_inf override " + fmt(*overrides.beta_inf) +
                        " exceeds the sampled minimum of β " + fmt(beta_lo));
        }
        beta_lo = *overrides.beta_inf;
    }
    if (overrides.beta_sup) {
        if (std::isfinite(beta_hi) && *overrides.beta_sup < beta_hi - slack(beta_hi)) {
            v.push_back("beta_sup override " + fmt(*overrides.beta_sup) +
                        " is below the sampled maximum of β " + fmt(beta_hi));
        }
        beta_hi = *overrides.beta_sup;
    }
    if (!std::isnan(beta_lo) && !(beta_lo > 0.0)) {
        v.push_back("β must be bounded below by a positive constant (inf β = " + fmt(beta_lo) + ")");
    }
    if (!std::isnan(beta_lo) && !std::isnan(beta_hi) && beta_hi < beta_lo) {
        v.push_back("beta_sup is below beta_inf");
    }
    agg.beta_minus = beta_lo;
    agg.beta_plus = beta_hi;
    agg.beta_sampled = !(overrides.beta_inf && overrides.beta_sup);

    if (overrides.zeta_M && !(*overrides.zeta_M >= 0.0)) {
        v.push_back("zeta_M override must be nonnegative");
    }
    return report;
}

ValidationReport validate(const NicholsonModel& model, const BoundOverrides& overrides) {
    return validate(model, default_validation_horizon(model), kDefaultValidationSamples, overrides);
}

Aggregates require_valid(const NicholsonModel& model, const BoundOverrides& overrides) {
    auto report = validate(model, overrides);
    if (!report.ok()) throw ValidationError(std::move(report.violations));
    return report.aggregates;
}

std::vector<std::string> validate_history(const InitialHistory& history, double t0, double tau_max,
                                          std::size_t n) {
    std::vector<std::string> v;
    try {
        const double at_t0 = history.phi.eval(t0);
        if (!(at_t0 > 0.0)) v.push_back("history must be positive at t0 (phi(t0) = " + fmt(at_t0) + ")");
        if (tau_max > 0.0) {
            const auto r = sample_bounds(history.phi, t0 - tau_max, t0, std::max<std::size_t>(n, 2));
            if (r.lo < 0.0) {
                v.push_back("history must be nonnegative on [t0 - tau, t0] (sampled minimum " +
                            fmt(r.lo) + ")");
            }
        }
    } catch (const DomainError& e) {
        v.push_back(std::string("history must be defined on [t0 - tau, t0] (") + e.what() + ")");
    }
    return v;
}

double rhs(const NicholsonModel& model, double t, double x_now, std::span<const DelayedState> delayed) {
    double recruitment = 0.0;
    for (std::size_t j = 0; j < model.pairs.size(); ++j) {
        const auto& pair = model.pairs[j];
        recruitment += pair.p * delayed[j].x_tau * std::exp(-pair.a * delayed[j].x_sigma);
    }
    return model.beta.eval(t) * (recruitment - model.delta * x_now);
}

LinearDelayModel linearize(const NicholsonModel& model, double K) {
    if (!(K > 0.0)) throw std::invalid_argument("linearize: K must be positive");
    LinearDelayModel lin;
    lin.beta = model.beta;
    lin.t0 = model.t0;
    lin.K = K;
    const std::size_t m = model.pairs.size();
    lin.terms.reserve(2 * m + 1);
    lin.terms.push_back({model.delta, LinearTerm::Lag::None, 0, TimeExpr::constant(0.0)});
    for (std::size_t j = 0; j < m; ++j) {
        const auto& pair = model.pairs[j];
        lin.terms.push_back({-pair.p * std::exp(-pair.a * K), LinearTerm::Lag::Tau, j, pair.tau});
    }
    for (std::size_t j = 0; j < m; ++j) {
        const auto& pair = model.pairs[j];
        lin.terms.push_back(
            {pair.a * K * pair.p * std::exp(-pair.a * K), LinearTerm::Lag::Sigma, j, pair.sigma});
    }
    return lin;
}

double rhs(const LinearDelayModel& model, double t, std::span<const double> lagged) {
    double s = 0.0;
    for (std::size_t k = 0; k < model.terms.size(); ++k) s += model.terms[k].coefficient * lagged[k];
    return -model.beta.eval(t) * s;
}

}  // namespace nicholson
