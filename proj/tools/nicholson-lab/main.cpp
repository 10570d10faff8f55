#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nicholson/lab/commands.hpp"

namespace lab = nicholson::lab;

namespace {

void add_common(CLI::App* cmd, lab::CommandOptions& o) {
    cmd->add_option("--scenario", o.scenario, "Scenario JSON file");
    cmd->add_option("--example", o.example, "Built-in example id (3.9 or 3.10)");
    cmd->add_option("--out", o.out, "Output file (stdout when omitted)");
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    // Options without a default are optional<double> and stay empty.
    cmd->add_option("--horizon", o.horizon, "Integration end time T");
    cmd->add_option("--step", o.step, "Step size h");
    cmd->add_option("--tail-window", o.tail_window, "Tail window for l/L estimates");
    cmd->add_option("--zeta", o.zeta, "zeta_M value (check: override; map-analyze: map parameter)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nicholson blowflies DDE simulator and stability criteria checker", "nicholson-lab"};
    app.require_subcommand(1);
    lab::CommandOptions o;

    auto* simulate = app.add_subcommand("simulate", "Integrate a scenario and report tail statistics");
    add_common(simulate, o);

    auto* check = app.add_subcommand("check", "Evaluate every stability criterion");
    add_common(check, o);

    auto* map = app.add_subcommand("map-analyze", "Analyse the auxiliary one-dimensional map");
    add_common(map, o);
    map->add_option("--orbit-out", o.orbit_out, "Orbit CSV (n,x)");
    map->add_option("--cobweb-out", o.cobweb_out, "Cobweb pairs CSV (x_n,x_{n+1})");
    map->add_option("--iterations", o.iterations, "Orbit length from theta");
    map->add_option("--grid", o.grid, "Expansive interval search grid size");

    auto* sweep = app.add_subcommand("sweep", "Evaluate criteria over a parameter grid");
    add_common(sweep, o);
    sweep->add_option("--param", o.params, "Axis path:lo:hi:count (one or two)")->required();
    sweep->add_option("--criteria", o.criteria, "Criteria to report (default all)")->delimiter(',');
    sweep->add_flag("--simulate", o.simulate, "Also simulate each point and flag convergence");
    sweep->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");

    auto* reproduce = app.add_subcommand("reproduce", "Recompute the published example figures");
    add_common(reproduce, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (simulate->parsed()) return lab::cmd_simulate(o, std::cout, std::cerr);
    if (check->parsed()) return lab::cmd_check(o, std::cout, std::cerr);
    if (map->parsed()) return lab::cmd_map_analyze(o, std::cout, std::cerr);
    if (sweep->parsed()) return lab::cmd_sweep(o, std::cout, std::cerr);
    return lab::cmd_reproduce(o, std::cout, std::cerr);
}
