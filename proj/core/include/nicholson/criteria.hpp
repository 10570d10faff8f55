#pragma once

// Analytic stability criteria for the model, each evaluated as a Verdict.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nicholson/diffmap.hpp"
#include "nicholson/integrator.hpp"
#include "nicholson/model.hpp"
#include "nicholson/verdict.hpp"

namespace nicholson {

struct ExtinctionVerdict {
    Verdict attractor;    ///< p <= delta
    Verdict exponential;  ///< p < delta
};

[[nodiscard]] ExtinctionVerdict check_extinction(const NicholsonModel& model);

struct PermanenceBounds {
    double lower = 0.0;  ///< K exp(-2 delta beta+ tau)
    double upper = 0.0;  ///< K exp(2 (delta + p) beta+ tau)
};

/// nullopt when p <= delta.
[[nodiscard]] std::optional<PermanenceBounds> permanence_bounds(const NicholsonModel& model, const Aggregates& agg,
                                                                double K);

struct LocalStability {
    Verdict weighted_integral;  ///< las_lhs < W / (2 delta + K W)
    Verdict uniform;            ///< zeta < 1 / (2 delta + K W)
    Verdict uniform_weak;       ///< zeta < 1 / (delta (2 + a+ K))
    Verdict single_pair;        ///< zeta < 1 / (delta (2 + log(p/delta))), m = 1 only
};

/// W = sum_j a_j p_j exp(-a_j K).
[[nodiscard]] LocalStability check_local_stability(const NicholsonModel& model, double K,
                                                   const DelayIntegrals& integrals);

/// m = 1: (exp(delta zeta) - 1) log(p/delta) <= 1.
[[nodiscard]] Verdict check_ga_m1(const NicholsonModel& model, double zeta);

struct GasVerdict {
    Verdict verdict;
    std::string branch = "i";  ///< "i" when log(p/delta) <= c, else "ii"
    double c = 0.0;     ///< 2 delta zeta / (exp(delta zeta) - delta zeta - 1); +inf at zeta = 0
};

[[nodiscard]] GasVerdict check_gas_m1(const NicholsonModel& model, double zeta);

struct GaMulti {
    Verdict rate_ratio;  ///< a+/a- < 3/2
    Verdict delay_size;  ///< a+ K (exp(delta zeta) - 1) <= 1
    Conjunction combined;
};

[[nodiscard]] GaMulti check_ga_multi(const NicholsonModel& model, double K, double zeta);

struct GaMultiNoK {
    Verdict rate_ratio;
    Verdict delay_size;  ///< (a+/a-) (exp(delta zeta) - 1) log(p/delta) <= 1
    Conjunction combined;
};

[[nodiscard]] GaMultiNoK check_ga_multi_no_k(const NicholsonModel& model, double zeta);

struct ClaimsRoute {
    Verdict schwarzian;    ///< Sf < 0 on a grid of [K exp(-delta zeta), x_hi]
    Verdict slope;         ///< |K (exp(delta zeta) - 1) f'(K)| <= 1
    Verdict well_defined;  ///< (1 - exp(-delta zeta)) f(K exp(-delta zeta)) < 1
    Conjunction combined;
    std::size_t grid = 0;
};

inline constexpr std::size_t kClaimsGrid = 10001;

/// x_hi is normally the permanence upper bound; values above 1e300 are capped.
[[nodiscard]] ClaimsRoute check_claims_route(const NicholsonModel& model, double K, double zeta, double x_hi,
                                             std::size_t grid = kClaimsGrid);

struct CriteriaReport {
    Aggregates aggregates;
    ExtinctionVerdict extinction;
    std::optional<double> K;
    std::optional<PermanenceBounds> permanence;
    DelayIntegrals integrals;
    bool zeta_estimated = true;
    LocalStability local;
    Verdict ga_single_pair;
    GasVerdict gas_single_pair;
    GaMulti ga_multi;
    GaMultiNoK ga_multi_no_k;
    ClaimsRoute claims;

    /// Named statuses of every verdict and conjunction, in report order.
    [[nodiscard]] std::vector<std::pair<std::string, Status>> statuses() const;
    /// Names of the global attractivity conclusions that pass.
    [[nodiscard]] std::vector<std::string> passing_global_criteria() const;
    [[nodiscard]] bool any_global_attractivity() const { return !passing_global_criteria().empty(); }
};

/// Every criterion name statuses() can return.
[[nodiscard]] const std::vector<std::string>& criterion_names();

/// Runs every criterion. Uses overrides.zeta_M when present, else samples.
[[nodiscard]] CriteriaReport assess(const NicholsonModel& model, const Aggregates& agg,
                                    const BoundOverrides& overrides, const ZetaSampling& sampling);

}  // namespace nicholson
