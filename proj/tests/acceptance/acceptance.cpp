// Acceptance suite: one PASS/FAIL line per numbered criterion, exit status
// is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "maps.hpp"
#include "models.hpp"
#include "nicholson/criteria.hpp"
#include "nicholson/diffmap.hpp"
#include "nicholson/equilibria.hpp"
#include "nicholson/integrator.hpp"
#include "nicholson/lab/builtin.hpp"
#include "nicholson/lab/sweep.hpp"
#include "oracles.hpp"

using namespace nicholson;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

const double kZetaStar = 10.0 * std::log(27.0 / 22.0);

Outcome carrying_capacity_k5() {
    Outcome o;
    const double K = carrying_capacity(fixtures::example_k5()).K;
    o.require(std::fabs(K - 5.0) <= 1e-10, fmt("K = %.17g", K));
    o.note(fmt("K = %.17g", K));
    return o;
}

Outcome map_derivative_identity() {
    Outcome o;
    const auto model = fixtures::example_k5();
    double worst = 0.0;
    for (double z : {0.05, 0.3, 0.9, 1.5, 1.9, kZetaStar, 2.5, 3.0}) {
        const auto map = build_map(model, 5.0, z);
        const double expected = -4.4 * std::expm1(0.1 * z);
        worst = std::max(worst, std::fabs(h_eval(map, 5.0, 1) - expected));
    }
    o.require(worst <= 1e-9, fmt("max |h'(5) + 4.4(e^{0.1 zeta} - 1)| = %.3g", worst));
    const double at_star = std::fabs(h_eval(build_map(model, 5.0, kZetaStar), 5.0, 1));
    o.require(std::fabs(at_star - 1.0) <= 1e-9, fmt("|h'(5)| = %.17g at the threshold", at_star));
    o.note(fmt("max deviation %.3g, |h'(5)| - 1 = %.3g at zeta = %.10f", worst, at_star - 1.0, kZetaStar));
    return o;
}

Outcome delay_size_threshold() {
    Outcome o;
    const auto model = fixtures::example_k5();
    const double expected = 10.0 * std::log(1.2);

    auto base = *lab::builtin_scenario("3.9");
    base.run.zeta_samples = 101;
    lab::SweepSpec spec;
    spec.axes.push_back(lab::parse_axis("overrides.zeta_M:1:3:41"));
    spec.criteria = {"global_attractivity"};
    const auto sweep = lab::run_sweep(base, spec, 1);
    double last_hold = -1.0;
    double first_fail = std::numeric_limits<double>::infinity();
    for (const auto& row : sweep.rows) {
        if (row.statuses[0] == Status::holds) last_hold = std::max(last_hold, row.parameters[0]);
        if (row.statuses[0] == Status::fails) first_fail = std::min(first_fail, row.parameters[0]);
    }
    o.require(last_hold < first_fail, "sweep is not a single holds-to-fails flip");
    o.require(last_hold <= expected && expected <= first_fail, "sweep bracket misses the threshold");

    const double flip = lab::locate_flip([&](double z) { return check_ga_multi(model, 5.0, z).combined.passes; },
                                         last_hold, first_fail, 1e-9);
    o.require(std::fabs(flip - expected) <= 1e-6, fmt("flip at %.12f", flip));
    o.note(fmt("sweep bracket [%.3f, %.3f], flip %.12f", last_hold, first_fail, flip));
    return o;
}

Outcome claim_iii_bound() {
    Outcome o;
    const auto model = fixtures::example_k5();
    const auto map = build_map(model, 5.0, kZetaStar);
    const double lhs = map.well_defined_lhs();
    const double bound = (3.0 * std::exp(20.0 / 27.0) + 2.0 * std::exp(25.0 / 27.0)) / 27.0;
    o.require(lhs <= bound + 1e-12, fmt("lhs %.17g above bound %.17g", lhs, bound));
    o.require(std::fabs(bound - 0.42) <= 5e-4 && std::fabs(lhs - 0.42) <= 5e-4, fmt("lhs = %.6f", lhs));
    const auto claims = check_claims_route(model, 5.0, kZetaStar, 10.0, 1001);
    o.require(claims.well_defined.status == Status::holds, "well-definedness verdict does not hold");
    o.note(fmt("lhs %.12f, bound %.12f", lhs, bound));
    return o;
}

Outcome las_product() {
    Outcome o;
    const auto model = fixtures::example_k5();
    const double zeta = 1.5;
    const double product = model.delta * zeta * (2.0 + std::log(model.total_recruitment() / model.delta));
    o.require(std::fabs(product - 0.978) <= 1e-3 && product < 1.0, fmt("product = %.6f", product));
    const auto integrals = delay_integral_sup(model, 5.0, 0.0, 10.0, 11, zeta);
    const auto las = check_local_stability(model, 5.0, integrals);
    o.require(las.uniform.status == Status::holds,
              "uniform local stability verdict is " + std::string(to_string(las.uniform.status)));
    o.note(fmt("product %.6f; uniform bound %.6f > 1.5", product, las.uniform.rhs));
    return o;
}

Outcome no_k_threshold() {
    Outcome o;
    const auto model = fixtures::example_small_p();
    const double expected = 100.0 / 9.0 * std::log(1.0 + 4.0 / (5.0 * std::log(10.0 / 9.0)));
    const bool below = check_ga_multi_no_k(model, 23.0).combined.passes;
    const bool above = !check_ga_multi_no_k(model, 25.0).combined.passes;
    o.require(below && above, "no flip inside [23, 25]");
    const double flip = lab::locate_flip(
        [&](double z) { return check_ga_multi_no_k(model, z).combined.passes; }, 23.0, 25.0, 1e-10);
    o.require(std::fabs(flip - 23.900) <= 0.01, fmt("flip at %.6f", flip));
    o.require(std::fabs(flip - expected) <= 1e-6, fmt("closed form %.10f", expected));
    o.note(fmt("flip %.10f, closed form %.10f", flip, expected));
    return o;
}

Outcome zeta_estimation() {
    Outcome o;
    const auto model = fixtures::example_k5();
    const auto sampling = default_zeta_sampling(0.0, 1.0);
    const auto z = delay_integral_sup(model, 5.0, sampling.t_skip, sampling.t_hi, sampling.n);
    o.require(z.zeta_M_sampled <= 2.0 + 1e-6, fmt("sampled zeta_M = %.12f", z.zeta_M_sampled));
    double worst = 0.0;
    for (auto [b, s] : {std::pair{1.0, 1.0}, {2.5, 0.4}, {0.3, 7.0}, {1.7, 0.9}}) {
        const auto m = fixtures::single_pair(2.0, 1.0, 0.5, "1", fmt("%.17g", s), fmt("%.17g", b));
        const auto c = delay_integral_sup(m, std::nullopt, 0.0, 50.0, 201);
        worst = std::max(worst, std::fabs(c.zeta_M_sampled - b * s));
    }
    o.require(worst <= 1e-10, fmt("constant-coefficient deviation %.3g", worst));
    o.note(fmt("sampled zeta_M %.10f, constant deviation %.3g", z.zeta_M_sampled, worst));
    return o;
}

Outcome permanence_corridor() {
    Outcome o;
    const auto scenario = *lab::builtin_scenario("3.9");
    const auto model = scenario.model();
    const auto agg = require_valid(model, scenario.bound_overrides());
    const double K = carrying_capacity(model).K;
    const auto bounds = *permanence_bounds(model, agg, K);
    const double eps = 1e-6;
    const double transient = 10.0;
    double worst_ms = 0.0;
    double lowest = std::numeric_limits<double>::infinity();
    double highest = 0.0;
    for (const char* phi : {"0.1", "1", "12", "40", "3 + 2*sin(5*t)"}) {
        const auto start = std::chrono::steady_clock::now();
        const auto traj = integrate(model, InitialHistory{parse(phi)}, 400.0, default_step(1.0));
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        worst_ms = std::max(worst_ms, ms);
        for (std::size_t i = 0; i < traj.size(); ++i) {
            if (traj.time(i) < transient) continue;
            const double x = traj.values()[i];
            lowest = std::min(lowest, x);
            highest = std::max(highest, x);
            if (x < bounds.lower - eps || x > bounds.upper + eps) {
                o.require(false, std::string("history ") + phi + fmt(" leaves the corridor at t = %.3f", traj.time(i)));
                break;
            }
        }
        o.require(ms < 60000.0, std::string("history ") + phi + " took over a minute");
    }
    o.note(fmt("corridor [%.6g, %.6g], observed min %.6g", bounds.lower, bounds.upper, lowest));
    o.note(fmt("observed max %.6g, slowest run %.0f ms", highest, worst_ms));
    return o;
}

Outcome global_attraction_corroboration() {
    Outcome o;
    std::size_t checked = 0;
    for (const auto& id : lab::builtin_ids()) {
        const auto scenario = *lab::builtin_scenario(id);
        const auto model = scenario.model();
        const auto overrides = scenario.bound_overrides();
        auto sampled_overrides = overrides;
        sampled_overrides.zeta_M.reset();
        const auto agg = require_valid(model, sampled_overrides);
        const auto settings = lab::resolve_run(scenario, agg.tau_max);
        const auto report = assess(model, agg, sampled_overrides, settings.zeta);
        if (!report.any_global_attractivity()) {
            o.note(id + ": no criterion holds, skipped");
            continue;
        }
        ++checked;
        const double K = *report.K;
        const double T = 500.0 + 100.0 * agg.tau_max;
        double worst_spread = 0.0;
        double worst_distance = 0.0;
        double worst_halving = 0.0;
        for (double phi : {0.1, 1.0, K, 2.0 * K, 10.0}) {
            const InitialHistory history{TimeExpr::constant(phi)};
            const auto coarse = integrate(model, history, T, settings.h);
            const auto fine = integrate(model, history, T, 0.5 * settings.h);
            const auto tail = tail_extrema(coarse, settings.tail_window);
            worst_spread = std::max(worst_spread, tail.spread());
            worst_distance =
                std::max({worst_distance, std::fabs(tail.l_est - K), std::fabs(tail.L_est - K)});
            for (std::size_t i = 0; i < coarse.size() && 2 * i < fine.size(); ++i) {
                worst_halving = std::max(worst_halving, std::fabs(coarse.values()[i] - fine.values()[2 * i]));
            }
        }
        o.require(worst_spread < 1e-3 && worst_distance < 1e-3, id + fmt(": spread %.3g, distance %.3g",
                                                                          worst_spread, worst_distance));
        o.require(worst_halving <= 1e-5, id + fmt(": step-halving difference %.3g", worst_halving));
        o.note(id + fmt(": K %.6g, spread %.2g, halving %.2g", K, worst_spread, worst_halving));
    }
    o.require(checked > 0, "no built-in scenario has a holding criterion");
    return o;
}

Outcome schwarzian_correctness() {
    Outcome o;
    auto g = oracle::rng(7);
    double single = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double a = oracle::uniform(g, 0.05, 5.0);
        const Recruitment f(0.3, {{oracle::uniform(g, 0.5, 20.0), a}});
        const double x = oracle::uniform(g, 0.0, 50.0);
        single = std::max(single, std::fabs(schwarzian_f(f, x) + 0.5 * a * a) / (0.5 * a * a));
    }
    o.require(single == 0.0, fmt("single-pair relative error %.3g", single));

    double pair_forms = 0.0;
    double derivs = 0.0;
    for (int k = 0; k < 200; ++k) {
        const Recruitment f(0.2, {{oracle::uniform(g, 0.5, 20.0), oracle::uniform(g, 0.1, 3.0)},
                                  {oracle::uniform(g, 0.5, 20.0), oracle::uniform(g, 0.1, 3.0)}});
        const double x = oracle::uniform(g, 0.0, 10.0);
        const double q = schwarzian_f(f, x);
        const double s = schwarzian_f_pairwise(f, x);
        pair_forms = std::max(pair_forms, std::fabs(q - s) / std::max(std::fabs(q), 1e-300));
        for (int order = 1; order <= 3; ++order) {
            const double step = 1e-4;
            const double fd =
                oracle::central_difference([&](double y) { return f.derivative(y, order - 1); }, x, step);
            const double exact = f.derivative(x, order);
            derivs = std::max(derivs, std::fabs(fd - exact) / std::fabs(exact));
        }
    }
    o.require(pair_forms <= 1e-10, fmt("quotient vs double-sum relative %.3g", pair_forms));
    o.require(derivs <= 1e-6, fmt("derivative vs central difference relative %.3g", derivs));
    o.note(fmt("single pair %.2g, forms %.2g, derivatives %.2g", single, pair_forms, derivs));
    return o;
}

Outcome attractor_consistency() {
    Outcome o;
    auto g = oracle::rng(2024);
    std::size_t holds = 0;
    std::size_t counterexamples = 0;
    for (int k = 0; k < 100; ++k) {
        const auto map = fixtures::random_map(g, k % 2 == 0, 2.0);
        const double x_hi = 10.0 * map.K;
        AttractorOptions opts;
        opts.sf_grid = 2001;
        const auto check = attractor_check(map, x_hi, opts);
        if (check.combined.status != Status::holds) continue;
        ++holds;
        const auto witness = expansive_interval_search(map, x_hi, 2001);
        if (witness || check.orbits.converged != 101) ++counterexamples;
    }
    o.require(counterexamples == 0, fmt("%.0f maps hold without corroboration", static_cast<double>(counterexamples)));
    o.require(holds >= 10, fmt("only %.0f maps hold", static_cast<double>(holds)));
    o.note(fmt("%.0f of 100 maps hold, all corroborated by 101 orbits", static_cast<double>(holds)));
    return o;
}

Outcome extinction_dichotomy() {
    Outcome o;
    struct Case {
        NicholsonModel model;
        double T;
        bool strict;
    };
    const std::vector<Case> cases = {
        {fixtures::single_pair(1.0, 20.0, 1.0, "1", "1", "1 + 0.5*sin(t)"), 3000.0, false},
        {fixtures::single_pair(0.3, 1.0, 0.5, "abs(cos(t))", "abs(cos(t))", "1 + sin(t)^2"), 200.0, true},
        {fixtures::two_pair(0.1, 0.8, 0.15, 1.0, 0.4), 200.0, true},
    };
    double worst_r2 = 1.0;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const auto& model = cases[c].model;
        const auto ext = check_extinction(model);
        o.require(ext.attractor.passes(), fmt("case %.0f: extinction verdict does not pass", static_cast<double>(c)));
        for (double phi : {1.0, 10.0}) {
            const auto traj = integrate(model, InitialHistory{TimeExpr::constant(phi)}, cases[c].T, 0.01);
            const double last = traj.values().back();
            o.require(last < 1e-4, fmt("case %.0f: x(T) = %.3g", static_cast<double>(c), last));
            if (!cases[c].strict) continue;
            std::vector<double> ts, logs;
            for (std::size_t i = traj.size() / 2; i < traj.size(); i += 10) {
                ts.push_back(traj.time(i));
                logs.push_back(std::log(traj.values()[i]));
            }
            const auto fit = oracle::fit_line(ts, logs);
            worst_r2 = std::min(worst_r2, fit.r2);
            o.require(fit.slope < 0.0 && fit.r2 > 0.99, fmt("case %.0f: slope %.3g, R2 %.5f", static_cast<double>(c),
                                                            fit.slope, fit.r2));
            o.require(ext.exponential.status == Status::holds, "strict case without exponential verdict");
        }
    }
    o.note(fmt("lowest R2 %.6f", worst_r2));
    return o;
}

Outcome implication_chain() {
    Outcome o;
    auto g = oracle::rng(99);
    std::size_t h2_star = 0, h1h2 = 0, single = 0, violations = 0;
    for (int k = 0; k < 200; ++k) {
        const int m = 1 + k % 3;
        NicholsonModel model;
        model.delta = oracle::uniform(g, 0.05, 1.0);
        model.beta = TimeExpr::constant(1.0);
        const double a0 = oracle::uniform(g, 0.2, 3.0);
        for (int j = 0; j < m; ++j) {
            const double a = k % 2 == 0 ? a0 * oracle::uniform(g, 1.0, 1.45) : oracle::uniform(g, 0.1, 3.0);
            model.pairs.push_back({model.delta * oracle::uniform(g, 1.2, 40.0) / m, a, TimeExpr::constant(1.0),
                                   TimeExpr::constant(1.0)});
        }
        const auto agg = require_valid(model);
        const double K = carrying_capacity(model).K;
        const double target = oracle::uniform(g, 0.0, 2.0);
        const double zeta = std::log1p(target / (agg.a_plus * K)) / model.delta;

        const auto multi = check_ga_multi(model, K, zeta);
        const auto no_k = check_ga_multi_no_k(model, zeta);
        if (no_k.delay_size.passes()) {
            ++h2_star;
            if (!multi.delay_size.passes()) ++violations;
        }
        if (multi.combined.passes) {
            ++h1h2;
            const auto bounds = *permanence_bounds(model, agg, K);
            const auto claims = check_claims_route(model, K, zeta, bounds.upper);
            if (!claims.combined.passes) {
                ++violations;
                o.note(fmt("claims fail at m = %.0f, zeta = %.6g, target %.4f", m, zeta, target));
            }
        }
        if (m == 1) {
            ++single;
            if (multi.combined.status != check_ga_m1(model, zeta).status) ++violations;
        }
    }
    o.require(violations == 0, fmt("%.0f implication violations", static_cast<double>(violations)));
    o.require(h2_star > 0 && h1h2 > 0 && single > 0, "an implication was never exercised");
    o.note(fmt("H2* held %.0f times, H1 and H2 %.0f times, %.0f single-pair models", static_cast<double>(h2_star),
               static_cast<double>(h1h2), static_cast<double>(single)));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"carrying capacity K = 5", carrying_capacity_k5},
        {"map derivative identity at K", map_derivative_identity},
        {"delay-size threshold 10 log 1.2", delay_size_threshold},
        {"well-definedness bound 0.42", claim_iii_bound},
        {"local stability product 0.978", las_product},
        {"delay-size threshold without K 23.90", no_k_threshold},
        {"delay integral estimation", zeta_estimation},
        {"permanence corridor", permanence_corridor},
        {"global attraction corroboration", global_attraction_corroboration},
        {"Schwarzian correctness", schwarzian_correctness},
        {"attractor check consistency", attractor_consistency},
        {"extinction dichotomy", extinction_dichotomy},
        {"implication chain", implication_chain},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%-5s criterion %2zu  %-38s (%.1f s)  %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, s,
                    o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
