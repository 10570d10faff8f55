#include "nicholson/lab/reproduce.hpp"

#include <cmath>

#include "nicholson/criteria.hpp"
#include "nicholson/diffmap.hpp"
#include "nicholson/equilibria.hpp"
#include "nicholson/lab/builtin.hpp"
#include "nicholson/lab/sweep.hpp"

namespace nicholson::lab {

namespace {

ReproLine line(std::string label, double reference, double computed, double tol) {
    return {std::move(label), reference, computed, tol, false, std::fabs(computed - reference) <= tol};
}

std::vector<ReproLine> example_3_9() {
    const auto scenario = *builtin_scenario("3.9");
    const auto model = scenario.model();
    const auto agg = require_valid(model, scenario.bound_overrides());
    const double K = carrying_capacity(model).K;
    std::vector<ReproLine> out;
    out.push_back(line("carrying capacity K", 5.0, K, 1e-10));

    const double zeta_star = 10.0 * std::log(27.0 / 22.0);
    const double found = locate_flip(
        [&](double z) { return check_claims_route(model, K, z, K, 3).slope.passes(); }, 0.0, 10.0, 1e-12);
    out.push_back(line("zeta with |h'(5)| = 1", zeta_star, found, 1e-6));

    const auto map = build_map(model, K, zeta_star);
    out.push_back(line("|h'(5)| at that zeta", 1.0, std::fabs(h_eval(map, K, 1)), 1e-9));
    out.push_back(line("|h'(5)| / (e^{0.1 zeta} - 1)", 4.4, std::fabs(h_eval(map, K, 1)) / std::expm1(0.1 * zeta_star),
                       1e-9));

    const double bound = (3.0 * std::exp(20.0 / 27.0) + 2.0 * std::exp(25.0 / 27.0)) / 27.0;
    ReproLine wd{"(1 - e^{-0.1 zeta}) f(theta), bound 0.42", bound, map.well_defined_lhs(), 5e-4, true, false};
    wd.pass = wd.computed <= wd.reference + 1e-12 && std::fabs(0.42 - wd.reference) <= 5e-4 && wd.computed < 1.0;
    out.push_back(wd);

    const double h2 = locate_flip([&](double z) { return check_ga_multi(model, K, z).delay_size.passes(); }, 0.0,
                                  10.0, 1e-10);
    out.push_back(line("delay-size threshold 10 log 1.2", 10.0 * std::log(1.2), h2, 1e-6));

    const double las = model.delta * 1.5 * (2.0 + std::log(model.total_recruitment() / model.delta));
    out.push_back(line("delta zeta (2 + log(p/delta)) at zeta = 3/2", 0.98, las, 5e-3));

    const auto settings = resolve_run(scenario, agg.tau_max);
    const auto integrals = delay_integral_sup(model, K, settings.zeta.t_skip, settings.zeta.t_hi, settings.zeta.n);
    ReproLine z{"sampled zeta_M (at most 2)", 2.0, integrals.zeta_M_sampled, 1e-6, true, false};
    z.pass = z.computed <= z.reference + z.tolerance;
    out.push_back(z);

    const auto ratio = check_ga_multi(model, K, 0.0).rate_ratio;
    out.push_back(line("a+/a-", 1.25, ratio.lhs, 1e-15));
    return out;
}

std::vector<ReproLine> example_3_10() {
    const auto model = builtin_scenario("3.10")->model();
    const double reference = 100.0 / 9.0 * std::log(1.0 + 4.0 / (5.0 * std::log(10.0 / 9.0)));
    const double found = locate_flip([&](double z) { return check_ga_multi_no_k(model, z).delay_size.passes(); },
                                     0.0, 100.0, 1e-10);
    std::vector<ReproLine> out;
    out.push_back(line("delay-size threshold without K", 23.90, found, 0.01));
    out.push_back(line("same, closed form", reference, found, 1e-6));
    return out;
}

}  // namespace

std::optional<std::vector<ReproLine>> reproduce(std::string_view id) {
    if (id == "3.9") return example_3_9();
    if (id == "3.10") return example_3_10();
    return std::nullopt;
}

}  // namespace nicholson::lab
