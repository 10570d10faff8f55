#include "nicholson/lab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "nicholson/criteria.hpp"
#include "nicholson/diffmap.hpp"
#include "nicholson/equilibria.hpp"
#include "nicholson/lab/builtin.hpp"
#include "nicholson/lab/reproduce.hpp"
#include "nicholson/lab/sweep.hpp"
#include "nicholson/report.hpp"

namespace nicholson::lab {

namespace {

using json = nlohmann::ordered_json;

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

void emit(const std::string& path, const std::string& content, std::ostream& fallback) {
    if (path.empty()) {
        fallback << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
    if (!f) throw std::runtime_error("failed writing " + path);
}

std::string format_or(const CommandOptions& o, const char* fallback) {
    const std::string f = o.format.empty() ? fallback : o.format;
    if (f != "json" && f != "csv") throw UsageError("--format must be json or csv");
    return f;
}

void require_history(const Scenario& s, const NicholsonModel& model, double tau_max) {
    const auto problems = validate_history(s.initial_history(), model.t0, tau_max);
    if (!problems.empty()) throw ValidationError(problems);
}

// Runs body and maps exceptions to exit code 2 with a message on err.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) err << "error: " << v << '\n';
    } catch (const MapUndefined& e) {
        err << "error: " << e.what() << '\n';
    } catch (const PositivityLoss& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return 2;
}

struct Prepared {
    Scenario scenario;
    NicholsonModel model;
    BoundOverrides overrides;
    Aggregates aggregates;
    RunSettings settings;
};

Prepared prepare(const CommandOptions& options, bool apply_zeta_override) {
    Prepared p;
    p.scenario = scenario_from_options(options);
    if (apply_zeta_override && options.zeta) p.scenario.overrides.zeta_M = Number::literal(*options.zeta);
    p.model = p.scenario.model();
    p.overrides = p.scenario.bound_overrides();
    p.aggregates = require_valid(p.model, p.overrides);
    p.settings = resolve_run(p.scenario, p.aggregates.tau_max);
    return p;
}

std::vector<const Verdict*> verdict_list(const CriteriaReport& r) {
    return {&r.extinction.attractor, &r.extinction.exponential, &r.local.weighted_integral, &r.local.uniform,
            &r.local.uniform_weak,   &r.local.single_pair,       &r.ga_single_pair,          &r.gas_single_pair.verdict,
            &r.ga_multi.rate_ratio,  &r.ga_multi.delay_size,     &r.ga_multi_no_k.delay_size, &r.claims.schwarzian,
            &r.claims.slope,         &r.claims.well_defined};
}

json verdict_object(const Verdict& v) { return json::parse(verdict_to_json(v, -1)); }

}  // namespace

Scenario scenario_from_options(const CommandOptions& o) {
    Scenario s;
    if (!o.scenario.empty() && !o.example.empty()) throw UsageError("give either --scenario or --example, not both");
    if (!o.scenario.empty()) {
        s = load_scenario(o.scenario);
    } else if (!o.example.empty()) {
        auto b = builtin_scenario(o.example);
        if (!b) throw UsageError("unknown example '" + o.example + "'");
        s = std::move(*b);
    } else {
        throw UsageError("--scenario <file> or --example <id> is required");
    }
    if (o.horizon) s.run.T = Number::literal(*o.horizon);
    if (o.step) s.run.h = Number::literal(*o.step);
    if (o.tail_window) s.run.tail_window = Number::literal(*o.tail_window);
    return s;
}

int cmd_simulate(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto format = format_or(options, "csv");
        const auto p = prepare(options, false);
        require_history(p.scenario, p.model, p.aggregates.tau_max);
        const auto traj = integrate(p.model, p.scenario.initial_history(), p.settings.T, p.settings.h);
        const double length = traj.t_end() - traj.t_start();
        double window = p.settings.tail_window;
        bool shrunk = false;
        if (!(window < length)) {
            window = 0.5 * length;
            shrunk = true;
        }
        const auto tail = tail_extrema(traj, window);
        const bool positive = p.model.total_recruitment() > p.model.delta;
        const double target = positive ? carrying_capacity(p.model).K : 0.0;

        if (!options.out.empty()) {
            std::ostringstream buf;
            if (format == "csv") {
                write_trajectory_csv(traj, buf);
            } else {
                json j;
                json t = json::array();
                json x = json::array();
                for (std::size_t i = 0; i < traj.size(); ++i) {
                    t.push_back(traj.time(i));
                    x.push_back(traj.values()[i]);
                }
                j["t"] = t;
                j["x"] = x;
                buf << j.dump() << '\n';
            }
            emit(options.out, buf.str(), out);
        }
        out << "steps " << traj.size() - 1 << " on [" << g17(traj.t_start()) << ", " << g17(traj.t_end())
            << "] with h = " << g17(traj.step()) << '\n';
        out << "tail window " << g17(window) << (shrunk ? " (shortened to half the run)" : "") << '\n';
        out << "l_est " << g17(tail.l_est) << '\n';
        out << "L_est " << g17(tail.L_est) << '\n';
        out << "spread " << g17(tail.spread()) << '\n';
        out << (positive ? "K " : "equilibrium 0 ") << g17(target) << '\n';
        out << "distance " << g17(std::max(std::fabs(tail.l_est - target), std::fabs(tail.L_est - target))) << '\n';
        return 0;
    });
}

int cmd_check(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto format = format_or(options, "json");
        const auto p = prepare(options, true);
        const auto report = assess(p.model, p.aggregates, p.overrides, p.settings.zeta);

        std::string body;
        if (format == "json") {
            body = report_to_json(report) + "\n";
        } else {
            std::ostringstream buf;
            buf << "criterion,status,lhs,rhs,margin\n";
            for (const Verdict* v : verdict_list(report)) {
                buf << v->name << ',' << to_string(v->status) << ',' << g17(v->lhs) << ',' << g17(v->rhs) << ','
                    << g17(v->margin) << '\n';
            }
            buf << "global_attractivity," << to_string(report.ga_multi.combined.status) << ",,,\n";
            buf << "global_attractivity_no_k," << to_string(report.ga_multi_no_k.combined.status) << ",,,\n";
            buf << "claims_route," << to_string(report.claims.combined.status) << ",,,\n";
            body = buf.str();
        }
        if (options.out.empty()) {
            out << body;
        } else {
            emit(options.out, body, out);
            for (const auto& [name, status] : report.statuses()) out << name << ' ' << to_string(status) << '\n';
        }
        const auto passing = report.passing_global_criteria();
        if (!options.out.empty()) {
            out << "global attractivity: " << (passing.empty() ? "no criterion passes" : "passes");
            for (const auto& n : passing) out << ' ' << n;
            out << '\n';
        }
        return passing.empty() ? 1 : 0;
    });
}

int cmd_map_analyze(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto format = format_or(options, "json");
        const auto p = prepare(options, false);
        const double K = carrying_capacity(p.model).K;

        double zeta = 0.0;
        std::string source;
        if (options.zeta) {
            zeta = *options.zeta;
            source = "flag";
        } else if (p.overrides.zeta_M) {
            zeta = *p.overrides.zeta_M;
            source = "override";
        } else {
            const auto& z = p.settings.zeta;
            zeta = delay_integral_sup(p.model, K, z.t_skip, z.t_hi, z.n).zeta_M_sampled;
            source = "sampled";
        }

        const auto map = build_map(p.model, K, zeta);
        const auto bounds = *permanence_bounds(p.model, p.aggregates, K);
        double x_hi = std::min(bounds.upper, 1e300);
        if (!(x_hi > map.theta * (1.0 + 1e-12))) x_hi = 2.0 * K;

        const auto check = attractor_check(map, x_hi);
        const auto witness = expansive_interval_search(map, x_hi, options.grid);
        const auto orbit = iterate(map, map.theta, options.iterations);

        json j;
        j["K"] = K;
        j["zeta"] = zeta;
        j["zeta_source"] = source;
        j["theta"] = map.theta;
        j["mu"] = map.mu;
        j["theta_1"] = map.theta_1 ? json(*map.theta_1) : json("none");
        j["degenerate"] = map.degenerate();
        j["well_defined_lhs"] = map.well_defined_lhs();
        j["h_prime_K"] = h_eval(map, K, 1);
        j["x_hi"] = x_hi;
        j["schwarzian_scan"] = {{"samples", check.scan.samples},
                                {"max", number(check.scan.max)},
                                {"argmax", check.scan.argmax},
                                {"min", number(check.scan.min)}};
        j["attractor_check"] = {{"status", std::string(to_string(check.combined.status))},
                                {"passes", check.combined.passes},
                                {"schwarzian_negative", verdict_object(check.schwarzian)},
                                {"fixed_point_slope", verdict_object(check.slope)},
                                {"orbits",
                                 {{"starts", check.orbits.starts},
                                  {"converged", check.orbits.converged},
                                  {"max_iterations_used", check.orbits.max_iterations_used},
                                  {"max_final_distance", check.orbits.max_final_distance}}}};
        j["expansive_interval"] = {{"grid", options.grid}, {"found", witness.has_value()}};
        if (witness) {
            j["expansive_interval"]["c"] = witness->c;
            j["expansive_interval"]["d"] = witness->d;
        }
        j["orbit"] = {{"x0", orbit.front()},
                      {"iterations", orbit.size() - 1},
                      {"last", orbit.back()},
                      {"distance_to_K", std::fabs(orbit.back() - K)}};

        std::ostringstream orbit_csv;
        write_orbit_csv(orbit, orbit_csv);
        if (format == "json") {
            emit(options.out, j.dump(2) + "\n", out);
        } else {
            emit(options.out, orbit_csv.str(), out);
        }
        if (!options.orbit_out.empty()) emit(options.orbit_out, orbit_csv.str(), out);
        if (!options.cobweb_out.empty()) {
            std::ostringstream cobweb;
            write_cobweb_csv(orbit, cobweb);
            emit(options.cobweb_out, cobweb.str(), out);
        }
        if (!options.out.empty()) {
            out << "h'(K) " << g17(h_eval(map, K, 1)) << '\n';
            out << "attractor check " << to_string(check.combined.status) << '\n';
            out << "expansive interval " << (witness ? "found" : "none at this resolution") << '\n';
        }
        return 0;
    });
}

int cmd_sweep(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto format = format_or(options, "csv");
        const auto base = scenario_from_options(options);
        SweepSpec spec;
        for (const auto& text : options.params) spec.axes.push_back(parse_axis(text));
        spec.criteria = options.criteria;
        spec.simulate = options.simulate;
        const auto result = run_sweep(base, spec, options.threads);
        std::ostringstream buf;
        if (format == "csv") {
            write_sweep_csv(result, buf);
        } else {
            buf << sweep_to_json(result);
        }
        emit(options.out, buf.str(), out);
        return 0;
    });
}

int cmd_reproduce(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto format = format_or(options, "json");
        if (options.example.empty()) throw UsageError("--example <id> is required (3.9 or 3.10)");
        const auto lines = reproduce(options.example);
        if (!lines) throw UsageError("unknown example '" + options.example + "'");
        bool all = true;
        char buf[256];
        for (const auto& l : *lines) {
            std::snprintf(buf, sizeof buf, "%-46s reference %-22.17g computed %-22.17g tol %-8.1e %s\n",
                          l.label.c_str(), l.reference, l.computed, l.tolerance, l.pass ? "PASS" : "FAIL");
            out << buf;
            all &= l.pass;
        }
        if (!options.out.empty()) {
            std::ostringstream body;
            if (format == "json") {
                json arr = json::array();
                for (const auto& l : *lines) {
                    arr.push_back({{"label", l.label},
                                   {"reference", l.reference},
                                   {"computed", l.computed},
                                   {"tolerance", l.tolerance},
                                   {"pass", l.pass}});
                }
                body << json{{"example", options.example}, {"lines", arr}}.dump(2) << '\n';
            } else {
                body << "label,reference,computed,tolerance,pass\n";
                for (const auto& l : *lines) {
                    body << '"' << l.label << "\"," << g17(l.reference) << ',' << g17(l.computed) << ','
                         << g17(l.tolerance) << ',' << (l.pass ? "true" : "false") << '\n';
                }
            }
            emit(options.out, body.str(), out);
        }
        return all ? 0 : 1;
    });
}

}  // namespace nicholson::lab
