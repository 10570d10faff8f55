#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nicholson/lab/scenario.hpp"

namespace nicholson::lab {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommandOptions {
    std::string scenario;  ///< path; alternatively example names a built-in
    std::string example;
    std::string out;  ///< empty writes to stdout where a command has a primary output
    std::string format;  ///< "json" or "csv"; empty picks the command default
    std::optional<double> horizon;
    std::optional<double> step;
    std::optional<double> tail_window;
    std::optional<double> zeta;

    // sweep
    std::vector<std::string> params;  ///< "path:lo:hi:count"
    std::vector<std::string> criteria;
    bool simulate = false;
    std::size_t threads = 0;

    // map-analyze
    std::string orbit_out;
    std::string cobweb_out;
    std::size_t iterations = 200;
    std::size_t grid = 2001;
};

/// Loads --scenario, or --example, and applies --horizon/--step/--tail-window.
[[nodiscard]] Scenario scenario_from_options(const CommandOptions& options);

/// Each returns the process exit code: 0 success, 2 on errors. check returns
/// 1 when no global attractivity criterion passes; reproduce returns 1 when
/// a figure is off.
int cmd_simulate(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_check(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_map_analyze(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_reproduce(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace nicholson::lab
