#include "nicholson/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nicholson/equilibria.hpp"

namespace nicholson {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGridCeiling = 1e300;
const char* const kNoEquilibrium = "no positive equilibrium (sum of p_j <= delta)";
const char* const kNeedsSinglePair = "requires exactly one delay pair";

double weight_sum(const NicholsonModel& model, double K) {
    double w = 0.0;
    for (const auto& pair : model.pairs) w += pair.a * pair.p * std::exp(-pair.a * K);
    return w;
}

double a_plus(const NicholsonModel& model) {
    double a = 0.0;
    for (const auto& pair : model.pairs) a = std::max(a, pair.a);
    return a;
}

double a_minus(const NicholsonModel& model) {
    double a = kInf;
    for (const auto& pair : model.pairs) a = std::min(a, pair.a);
    return a;
}

// exp(x) - x - 1 without cancellation for small x.
double exp_minus_linear(double x) {
    if (std::fabs(x) < 1e-4) return x * x * (0.5 + x * (1.0 / 6.0 + x / 24.0));
    return std::expm1(x) - x;
}

bool has_equilibrium(const NicholsonModel& model) { return model.total_recruitment() > model.delta; }

Verdict rate_ratio_verdict(const NicholsonModel& model) {
    const double hi = a_plus(model);
    const double lo = a_minus(model);
    Verdict v = Verdict::compare("rate_ratio", hi / lo, Relation::less, 1.5);
    v.with_input("a_plus", hi).with_input("a_minus", lo);
    return v;
}

}  // namespace

ExtinctionVerdict check_extinction(const NicholsonModel& model) {
    const double p = model.total_recruitment();
    ExtinctionVerdict out;
    out.attractor = Verdict::compare("extinction", p, Relation::less_equal, model.delta);
    out.exponential = Verdict::compare("extinction_exponential", p, Relation::less, model.delta);
    for (Verdict* v : {&out.attractor, &out.exponential}) v->with_input("p", p).with_input("delta", model.delta);
    return out;
}

std::optional<PermanenceBounds> permanence_bounds(const NicholsonModel& model, const Aggregates& agg, double K) {
    if (!has_equilibrium(model)) return std::nullopt;
    const double s = agg.beta_plus * agg.tau_max;
    return PermanenceBounds{K * std::exp(-2.0 * model.delta * s),
                            K * std::exp(2.0 * (model.delta + agg.p) * s)};
}

LocalStability check_local_stability(const NicholsonModel& model, double K, const DelayIntegrals& integrals) {
    LocalStability out;
    if (!has_equilibrium(model)) {
        out.weighted_integral = Verdict::not_applicable("local_exp_stability", kNoEquilibrium);
        out.uniform = Verdict::not_applicable("local_stability_uniform", kNoEquilibrium);
        out.uniform_weak = Verdict::not_applicable("local_stability_uniform_weak", kNoEquilibrium);
        out.single_pair = Verdict::not_applicable("local_stability_single_pair", kNoEquilibrium);
        return out;
    }
    const double W = weight_sum(model, K);
    const double d = model.delta;
    const double zeta = integrals.zeta_M;

    if (std::isnan(integrals.las_lhs)) {
        out.weighted_integral = Verdict::not_applicable("local_exp_stability", "weighted delay integral unavailable");
    } else {
        out.weighted_integral =
            Verdict::compare("local_exp_stability", integrals.las_lhs, Relation::less, W / (2.0 * d + K * W));
        if (integrals.las_from_override) out.weighted_integral.with_flag("bounded-by-zeta-override");
    }
    out.uniform = Verdict::compare("local_stability_uniform", zeta, Relation::less, 1.0 / (2.0 * d + K * W));
    out.uniform_weak =
        Verdict::compare("local_stability_uniform_weak", zeta, Relation::less, 1.0 / (d * (2.0 + a_plus(model) * K)));
    if (model.size() != 1) {
        out.single_pair = Verdict::not_applicable("local_stability_single_pair", kNeedsSinglePair);
    } else {
        const double L = std::log(model.total_recruitment() / d);
        out.single_pair =
            Verdict::compare("local_stability_single_pair", zeta, Relation::less, 1.0 / (d * (2.0 + L)));
    }
    for (Verdict* v : {&out.weighted_integral, &out.uniform, &out.uniform_weak, &out.single_pair}) {
        if (v->status != Status::inapplicable) v->with_input("K", K).with_input("zeta_M", zeta).with_input("W", W);
    }
    return out;
}

Verdict check_ga_m1(const NicholsonModel& model, double zeta) {
    if (model.size() != 1) return Verdict::not_applicable("global_attractivity_single_pair", kNeedsSinglePair);
    if (!has_equilibrium(model)) return Verdict::not_applicable("global_attractivity_single_pair", kNoEquilibrium);
    const double L = std::log(model.total_recruitment() / model.delta);
    Verdict v = Verdict::compare("global_attractivity_single_pair", std::expm1(model.delta * zeta) * L,
                                 Relation::less_equal, 1.0);
    v.with_input("zeta_M", zeta).with_input("log_p_over_delta", L);
    return v;
}

GasVerdict check_gas_m1(const NicholsonModel& model, double zeta) {
    GasVerdict out;
    const char* name = "global_asymptotic_stability_single_pair";
    if (model.size() != 1) {
        out.verdict = Verdict::not_applicable(name, kNeedsSinglePair);
        return out;
    }
    if (!has_equilibrium(model)) {
        out.verdict = Verdict::not_applicable(name, kNoEquilibrium);
        return out;
    }
    const double x = model.delta * zeta;
    const double L = std::log(model.total_recruitment() / model.delta);
    out.c = x == 0.0 ? kInf : 2.0 * x / exp_minus_linear(x);
    if (L <= out.c) {
        out.branch = "i";
        out.verdict = Verdict::compare(name, x * (2.0 + L), Relation::less, 1.0);
        if (x == 0.0) out.verdict.with_flag("degenerate-zero-delay-size");
    } else {
        out.branch = "ii";
        out.verdict = Verdict::compare(name, std::expm1(x) * L, Relation::less_equal, 1.0);
    }
    out.verdict.with_input("zeta_M", zeta).with_input("log_p_over_delta", L).with_input("c", out.c);
    out.verdict.with_flag(out.branch == "i" ? "case-i" : "case-ii");
    return out;
}

GaMulti check_ga_multi(const NicholsonModel& model, double K, double zeta) {
    GaMulti out;
    if (!has_equilibrium(model)) {
        out.rate_ratio = Verdict::not_applicable("rate_ratio", kNoEquilibrium);
        out.delay_size = Verdict::not_applicable("delay_size", kNoEquilibrium);
    } else {
        out.rate_ratio = rate_ratio_verdict(model);
        const double ap = a_plus(model);
        out.delay_size =
            Verdict::compare("delay_size", ap * K * std::expm1(model.delta * zeta), Relation::less_equal, 1.0);
        out.delay_size.with_input("a_plus", ap).with_input("K", K).with_input("zeta_M", zeta);
    }
    out.combined = Conjunction::of({&out.rate_ratio, &out.delay_size});
    return out;
}

GaMultiNoK check_ga_multi_no_k(const NicholsonModel& model, double zeta) {
    GaMultiNoK out;
    if (!has_equilibrium(model)) {
        out.rate_ratio = Verdict::not_applicable("rate_ratio", kNoEquilibrium);
        out.delay_size = Verdict::not_applicable("delay_size_no_k", kNoEquilibrium);
    } else {
        out.rate_ratio = rate_ratio_verdict(model);
        const double ratio = a_plus(model) / a_minus(model);
        const double L = std::log(model.total_recruitment() / model.delta);
        out.delay_size = Verdict::compare("delay_size_no_k", ratio * std::expm1(model.delta * zeta) * L,
                                          Relation::less_equal, 1.0);
        out.delay_size.with_input("rate_ratio", ratio).with_input("log_p_over_delta", L).with_input("zeta_M", zeta);
    }
    out.combined = Conjunction::of({&out.rate_ratio, &out.delay_size});
    return out;
}

ClaimsRoute check_claims_route(const NicholsonModel& model, double K, double zeta, double x_hi, std::size_t grid) {
    ClaimsRoute out;
    if (!has_equilibrium(model)) {
        out.schwarzian = Verdict::not_applicable("schwarzian_negative", kNoEquilibrium);
        out.slope = Verdict::not_applicable("fixed_point_slope", kNoEquilibrium);
        out.well_defined = Verdict::not_applicable("map_well_defined", kNoEquilibrium);
        out.combined = Conjunction::of({&out.schwarzian, &out.slope, &out.well_defined});
        return out;
    }
    const Recruitment f(model);
    const double dz = model.delta * zeta;
    const double theta = K * std::exp(-dz);
    const double mu = -std::expm1(-dz);
    bool capped = false;
    if (!(x_hi <= kGridCeiling)) {
        x_hi = kGridCeiling;
        capped = true;
    }
    x_hi = std::max(x_hi, theta);

    const auto scan = scan_schwarzian(f, theta, x_hi, grid);
    out.grid = scan.samples;
    out.schwarzian = Verdict::compare("schwarzian_negative", scan.max, Relation::less, 0.0);
    out.schwarzian.with_input("theta", theta).with_input("x_hi", x_hi).with_input("argmax", scan.argmax);
    out.schwarzian.with_input("grid", static_cast<double>(scan.samples));
    if (capped) out.schwarzian.with_flag("grid-upper-bound-capped");

    out.slope = Verdict::compare("fixed_point_slope", std::fabs(K * std::expm1(dz) * f.derivative(K, 1)),
                                 Relation::less_equal, 1.0);
    out.slope.with_input("K", K).with_input("zeta_M", zeta);

    out.well_defined = Verdict::compare("map_well_defined", mu * f.value(theta), Relation::less, 1.0);
    out.well_defined.with_input("theta", theta).with_input("mu", mu);

    out.combined = Conjunction::of({&out.schwarzian, &out.slope, &out.well_defined});
    return out;
}

const std::vector<std::string>& criterion_names() {
    static const std::vector<std::string> names = {
        "extinction",
        "extinction_exponential",
        "local_exp_stability",
        "local_stability_uniform",
        "local_stability_uniform_weak",
        "local_stability_single_pair",
        "global_attractivity_single_pair",
        "global_asymptotic_stability_single_pair",
        "rate_ratio",
        "delay_size",
        "global_attractivity",
        "delay_size_no_k",
        "global_attractivity_no_k",
        "schwarzian_negative",
        "fixed_point_slope",
        "map_well_defined",
        "claims_route",
    };
    return names;
}

std::vector<std::pair<std::string, Status>> CriteriaReport::statuses() const {
    return {
        {"extinction", extinction.attractor.status},
        {"extinction_exponential", extinction.exponential.status},
        {"local_exp_stability", local.weighted_integral.status},
        {"local_stability_uniform", local.uniform.status},
        {"local_stability_uniform_weak", local.uniform_weak.status},
        {"local_stability_single_pair", local.single_pair.status},
        {"global_attractivity_single_pair", ga_single_pair.status},
        {"global_asymptotic_stability_single_pair", gas_single_pair.verdict.status},
        {"rate_ratio", ga_multi.rate_ratio.status},
        {"delay_size", ga_multi.delay_size.status},
        {"global_attractivity", ga_multi.combined.status},
        {"delay_size_no_k", ga_multi_no_k.delay_size.status},
        {"global_attractivity_no_k", ga_multi_no_k.combined.status},
        {"schwarzian_negative", claims.schwarzian.status},
        {"fixed_point_slope", claims.slope.status},
        {"map_well_defined", claims.well_defined.status},
        {"claims_route", claims.combined.status},
    };
}

std::vector<std::string> CriteriaReport::passing_global_criteria() const {
    std::vector<std::string> out;
    if (extinction.attractor.passes()) out.emplace_back("extinction");
    if (ga_single_pair.passes()) out.emplace_back("global_attractivity_single_pair");
    if (gas_single_pair.verdict.passes()) out.emplace_back("global_asymptotic_stability_single_pair");
    if (ga_multi.combined.passes) out.emplace_back("global_attractivity");
    if (ga_multi_no_k.combined.passes) out.emplace_back("global_attractivity_no_k");
    if (claims.combined.passes) out.emplace_back("claims_route");
    return out;
}

CriteriaReport assess(const NicholsonModel& model, const Aggregates& agg, const BoundOverrides& overrides,
                      const ZetaSampling& sampling) {
    CriteriaReport r;
    r.aggregates = agg;
    r.extinction = check_extinction(model);
    if (has_equilibrium(model)) {
        r.K = carrying_capacity(model).K;
        r.permanence = permanence_bounds(model, agg, *r.K);
    }
    r.integrals = delay_integral_sup(model, r.K, sampling.t_skip, sampling.t_hi, sampling.n, overrides.zeta_M);
    r.zeta_estimated = r.integrals.estimated;
    const double zeta = r.integrals.zeta_M;
    const double K = r.K.value_or(std::numeric_limits<double>::quiet_NaN());

    r.local = check_local_stability(model, K, r.integrals);
    r.ga_single_pair = check_ga_m1(model, zeta);
    r.gas_single_pair = check_gas_m1(model, zeta);
    r.ga_multi = check_ga_multi(model, K, zeta);
    r.ga_multi_no_k = check_ga_multi_no_k(model, zeta);
    if (r.K) {
        r.claims = check_claims_route(model, K, zeta, r.permanence->upper);
    } else {
        r.claims = check_claims_route(model, 1.0, zeta, 1.0);
    }

    const bool below_sample = !r.zeta_estimated && zeta < r.integrals.zeta_M_sampled - 1e-9 * std::max(1.0, zeta);
    for (Verdict* v : {&r.local.weighted_integral, &r.local.uniform, &r.local.uniform_weak, &r.local.single_pair,
                       &r.ga_single_pair, &r.gas_single_pair.verdict, &r.ga_multi.delay_size,
                       &r.ga_multi_no_k.delay_size, &r.claims.schwarzian, &r.claims.slope, &r.claims.well_defined}) {
        if (v->status == Status::inapplicable) continue;
        if (r.zeta_estimated) v->with_flag("estimated-input");
        if (below_sample) v->with_flag("zeta-override-below-sampled");
    }
    if (agg.beta_sampled || agg.tau_sampled) {
        if (r.claims.schwarzian.status != Status::inapplicable) r.claims.schwarzian.with_flag("sampled-grid-bound");
    }
    return r;
}

}  // namespace nicholson
