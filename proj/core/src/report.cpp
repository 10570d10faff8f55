#include "nicholson/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "json.hpp"

namespace nicholson {

namespace {

using json = nlohmann::ordered_json;

json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

json rounded(double x) {
    if (!std::isfinite(x)) return number(x);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return std::strtod(buf, nullptr);
}

json verdict_json(const Verdict& v) {
    json j;
    j["status"] = std::string(to_string(v.status));
    j["relation"] = v.relation == Relation::less ? "<" : "<=";
    j["lhs"] = number(v.lhs);
    j["rhs"] = number(v.rhs);
    j["margin"] = number(v.margin);
    j["passes"] = v.passes();
    json inputs = json::object();
    for (const auto& [key, value] : v.inputs) inputs[key] = number(value);
    j["inputs"] = inputs;
    j["flags"] = v.flags;
    if (!v.reason.empty()) j["reason"] = v.reason;
    j["display"] = {{"lhs", rounded(v.lhs)}, {"rhs", rounded(v.rhs)}, {"margin", rounded(v.margin)}};
    return j;
}

json conjunction_json(const Conjunction& c, std::initializer_list<const char*> parts) {
    json j;
    j["status"] = std::string(to_string(c.status));
    j["passes"] = c.passes;
    j["all_of"] = json::array();
    for (const char* p : parts) j["all_of"].push_back(p);
    return j;
}

}  // namespace

std::string verdict_to_json(const Verdict& verdict, int indent) { return verdict_json(verdict).dump(indent); }

std::string report_to_json(const CriteriaReport& r, int indent) {
    json j;
    const auto& agg = r.aggregates;
    j["aggregates"] = {
        {"p", number(agg.p)},
        {"a_plus", number(agg.a_plus)},
        {"a_minus", number(agg.a_minus)},
        {"tau_max", number(agg.tau_max)},
        {"beta_plus", number(agg.beta_plus)},
        {"beta_minus", number(agg.beta_minus)},
        {"beta_sampled", agg.beta_sampled},
        {"tau_sampled", agg.tau_sampled},
    };
    j["K"] = r.K ? number(*r.K) : json(nullptr);
    if (r.permanence) {
        j["permanence_bounds"] = {{"lower", number(r.permanence->lower)}, {"upper", number(r.permanence->upper)}};
    } else {
        j["permanence_bounds"] = {{"status", "inapplicable"}, {"reason", "no positive equilibrium"}};
    }
    json zeta_per_pair = json::array();
    for (double z : r.integrals.zeta_per_pair) zeta_per_pair.push_back(number(z));
    j["delay_integrals"] = {
        {"zeta_M", number(r.integrals.zeta_M)},
        {"zeta_M_sampled", number(r.integrals.zeta_M_sampled)},
        {"zeta_per_pair", zeta_per_pair},
        {"las_lhs", number(r.integrals.las_lhs)},
        {"estimated", r.integrals.estimated},
    };

    json c;
    auto put = [&](const Verdict& v) { c[v.name] = verdict_json(v); };
    put(r.extinction.attractor);
    put(r.extinction.exponential);
    put(r.local.weighted_integral);
    put(r.local.uniform);
    put(r.local.uniform_weak);
    put(r.local.single_pair);
    put(r.ga_single_pair);
    c[r.gas_single_pair.verdict.name] = verdict_json(r.gas_single_pair.verdict);
    if (r.gas_single_pair.verdict.status != Status::inapplicable) {
        c[r.gas_single_pair.verdict.name]["case"] = r.gas_single_pair.branch;
    }
    put(r.ga_multi.rate_ratio);
    put(r.ga_multi.delay_size);
    c["global_attractivity"] = conjunction_json(r.ga_multi.combined, {"rate_ratio", "delay_size"});
    put(r.ga_multi_no_k.delay_size);
    c["global_attractivity_no_k"] = conjunction_json(r.ga_multi_no_k.combined, {"rate_ratio", "delay_size_no_k"});
    put(r.claims.schwarzian);
    put(r.claims.slope);
    put(r.claims.well_defined);
    c["claims_route"] =
        conjunction_json(r.claims.combined, {"schwarzian_negative", "fixed_point_slope", "map_well_defined"});
    j["criteria"] = c;
    j["global_attractivity_passing"] = r.passing_global_criteria();
    return j.dump(indent);
}

}  // namespace nicholson
