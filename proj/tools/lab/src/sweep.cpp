#include "nicholson/lab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "nicholson/equilibria.hpp"
#include "nicholson/grid.hpp"

namespace nicholson::lab {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

double to_double(const std::string& s, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw std::invalid_argument("sweep axis: bad " + what + " '" + s + "'");
    return v;
}

std::vector<std::string> resolve_criteria(const SweepSpec& spec) {
    return spec.criteria.empty() ? criterion_names() : spec.criteria;
}

SweepRow evaluate_point(const Scenario& base, const SweepSpec& spec, const std::vector<std::string>& criteria,
                        const std::vector<double>& params) {
    SweepRow row;
    row.parameters = params;
    row.statuses.assign(criteria.size(), Status::inapplicable);
    try {
        Scenario s = base;
        for (std::size_t k = 0; k < spec.axes.size(); ++k) set_parameter(s, spec.axes[k].path, params[k]);
        const auto model = s.model();
        const auto overrides = s.bound_overrides();
        const auto agg = require_valid(model, overrides);
        const auto settings = resolve_run(s, agg.tau_max);
        const auto report = assess(model, agg, overrides, settings.zeta);
        const auto all = report.statuses();
        for (std::size_t c = 0; c < criteria.size(); ++c) {
            for (const auto& [name, status] : all) {
                if (name == criteria[c]) row.statuses[c] = status;
            }
        }
        if (spec.simulate) {
            try {
                row.simulated = simulate_converges(s) ? "converged" : "not_converged";
            } catch (const std::exception&) {
                row.simulated = "error";
            }
        }
    } catch (const std::exception& e) {
        row.error = e.what();
        if (spec.simulate) row.simulated = "error";
    }
    return row;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

}  // namespace

SweepAxis parse_axis(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 4) throw std::invalid_argument("sweep axis must be path:lo:hi:count, got '" + text + "'");
    SweepAxis axis;
    axis.path = parts[0];
    axis.lo = to_double(parts[1], "lo");
    axis.hi = to_double(parts[2], "hi");
    const double count = to_double(parts[3], "count");
    if (!(count >= 0.0) || count != std::floor(count)) throw std::invalid_argument("sweep axis: count must be an integer");
    axis.count = static_cast<std::size_t>(count);
    return axis;
}

void validate_sweep(const Scenario& base, const SweepSpec& spec) {
    if (spec.axes.empty() || spec.axes.size() > 2) throw std::invalid_argument("sweep needs one or two axes");
    for (const auto& axis : spec.axes) {
        if (axis.count < 2) throw std::invalid_argument("sweep axis " + axis.path + ": count must be >= 2");
        Scenario probe = base;
        set_parameter(probe, axis.path, axis.lo);
    }
    const auto& known = criterion_names();
    for (const auto& c : spec.criteria) {
        if (std::find(known.begin(), known.end(), c) == known.end()) {
            throw std::invalid_argument("unknown criterion '" + c + "'");
        }
    }
}

SweepResult run_sweep(const Scenario& base, const SweepSpec& spec, std::size_t threads) {
    validate_sweep(base, spec);
    SweepResult result;
    for (const auto& axis : spec.axes) result.parameter_names.push_back(axis.path);
    result.criteria = resolve_criteria(spec);

    std::vector<std::vector<double>> points;
    const auto first = linspace(spec.axes[0].lo, spec.axes[0].hi, spec.axes[0].count);
    if (spec.axes.size() == 1) {
        for (double a : first) points.push_back({a});
    } else {
        const auto second = linspace(spec.axes[1].lo, spec.axes[1].hi, spec.axes[1].count);
        for (double a : first) {
            for (double b : second) points.push_back({a, b});
        }
    }

    result.rows.resize(points.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            result.rows[i] = evaluate_point(base, spec, result.criteria, points[i]);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
    bool simulated = false;
    for (const auto& row : result.rows) simulated |= !row.simulated.empty();
    for (const auto& p : result.parameter_names) out << p << ',';
    for (const auto& c : result.criteria) out << c << ',';
    if (simulated) out << "simulated,";
    out << "error\n";
    char buf[40];
    for (const auto& row : result.rows) {
        for (double v : row.parameters) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf << ',';
        }
        for (Status s : row.statuses) out << to_string(s) << ',';
        if (simulated) out << row.simulated << ',';
        out << csv_escape(row.error) << '\n';
    }
}

std::string sweep_to_json(const SweepResult& result) {
    using json = nlohmann::ordered_json;
    json rows = json::array();
    for (const auto& row : result.rows) {
        json r;
        for (std::size_t k = 0; k < row.parameters.size(); ++k) r[result.parameter_names[k]] = row.parameters[k];
        for (std::size_t c = 0; c < row.statuses.size(); ++c) r[result.criteria[c]] = to_string(row.statuses[c]);
        if (!row.simulated.empty()) r["simulated"] = row.simulated;
        if (!row.error.empty()) r["error"] = row.error;
        rows.push_back(r);
    }
    json root;
    root["parameters"] = result.parameter_names;
    root["criteria"] = result.criteria;
    root["rows"] = rows;
    return root.dump(2) + "\n";
}

double locate_flip(const std::function<bool(double)>& predicate, double lo, double hi, double tol) {
    const bool at_lo = predicate(lo);
    if (at_lo == predicate(hi)) throw std::invalid_argument("locate_flip: predicate does not change on the bracket");
    while (std::fabs(hi - lo) > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (predicate(mid) == at_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

bool simulate_converges(const Scenario& scenario, double tol) {
    const auto model = scenario.model();
    const auto agg = require_valid(model, scenario.bound_overrides());
    const auto settings = resolve_run(scenario, agg.tau_max);
    const double target = model.total_recruitment() > model.delta ? carrying_capacity(model).K : 0.0;
    const auto traj = integrate(model, scenario.initial_history(), settings.T, settings.h);
    const auto tail = tail_extrema(traj, settings.tail_window);
    return tail.spread() < tol && std::fabs(tail.L_est - target) < tol && std::fabs(tail.l_est - target) < tol;
}

}  // namespace nicholson::lab
