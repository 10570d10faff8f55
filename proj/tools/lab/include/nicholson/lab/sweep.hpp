#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "nicholson/criteria.hpp"
#include "nicholson/lab/scenario.hpp"

namespace nicholson::lab {

struct SweepAxis {
    std::string path;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
};

/// Parses "path:lo:hi:count".
[[nodiscard]] SweepAxis parse_axis(const std::string& text);

struct SweepSpec {
    std::vector<SweepAxis> axes;     ///< one or two
    std::vector<std::string> criteria;  ///< empty means all
    bool simulate = false;
};

struct SweepRow {
    std::vector<double> parameters;
    std::vector<Status> statuses;  ///< parallel to the resolved criterion list
    std::string simulated;         ///< "converged", "not_converged", "error" or empty
    std::string error;
};

struct SweepResult {
    std::vector<std::string> parameter_names;
    std::vector<std::string> criteria;
    std::vector<SweepRow> rows;  ///< grid order, first axis slowest
};

/// Checks counts >= 2, at most two axes, resolvable paths and known criteria.
void validate_sweep(const Scenario& base, const SweepSpec& spec);

/// threads = 0 uses the hardware concurrency.
[[nodiscard]] SweepResult run_sweep(const Scenario& base, const SweepSpec& spec, std::size_t threads = 0);

void write_sweep_csv(const SweepResult& result, std::ostream& out);
[[nodiscard]] std::string sweep_to_json(const SweepResult& result);

/// Bisection for the point in [lo, hi] where predicate changes value;
/// predicate(lo) != predicate(hi) is required. Returns the midpoint of the
/// final bracket, whose width is at most tol.
[[nodiscard]] double locate_flip(const std::function<bool(double)>& predicate, double lo, double hi, double tol);

/// Simulated convergence of one scenario: tail spread and distance to K
/// below tol.
[[nodiscard]] bool simulate_converges(const Scenario& scenario, double tol = 1e-3);

}  // namespace nicholson::lab
