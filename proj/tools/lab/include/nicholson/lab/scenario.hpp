#pragma once

// Scenario files: JSON with numeric fields given either as numbers or as
// constant expression strings, and time-dependent fields as expressions.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nicholson/integrator.hpp"
#include "nicholson/model.hpp"

namespace nicholson::lab {

/// Thrown with the JSON path of the offending field.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string field, const std::string& message);
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A scalar as written: either a JSON number (text empty) or a constant
/// expression such as "3/50*exp(4)".
struct Number {
    double value = 0.0;
    std::string text;

    [[nodiscard]] static Number literal(double v) { return {v, {}}; }
    [[nodiscard]] static Number expression(std::string source);  ///< throws ScenarioError
};

struct PairSpec {
    Number p;
    Number a;
    std::string tau;
    std::string sigma;
};

struct OverrideSpec {
    std::optional<Number> beta_inf;
    std::optional<Number> beta_sup;
    std::optional<Number> tau_max;
    std::optional<Number> zeta_M;

    [[nodiscard]] bool empty() const noexcept { return !beta_inf && !beta_sup && !tau_max && !zeta_M; }
};

struct RunSpec {
    std::optional<Number> T;
    std::optional<Number> h;
    std::optional<Number> tail_window;
    std::optional<Number> zeta_t_skip;
    std::optional<Number> zeta_t_hi;
    std::optional<std::size_t> zeta_samples;

    [[nodiscard]] bool empty() const noexcept {
        return !T && !h && !tail_window && !zeta_t_skip && !zeta_t_hi && !zeta_samples;
    }
};

struct Scenario {
    std::optional<std::string> name;
    std::optional<std::string> description;
    Number delta;
    std::string beta;
    std::optional<Number> t0;
    std::vector<PairSpec> pairs;
    std::optional<std::string> history;  ///< defaults to "1"
    OverrideSpec overrides;
    RunSpec run;

    /// Throws ScenarioError if an expression does not parse.
    [[nodiscard]] NicholsonModel model() const;
    [[nodiscard]] InitialHistory initial_history() const;
    [[nodiscard]] BoundOverrides bound_overrides() const;
    [[nodiscard]] double start_time() const { return t0 ? t0->value : 0.0; }
};

[[nodiscard]] Scenario parse_scenario(std::string_view json_text);
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);
[[nodiscard]] std::string serialize(const Scenario& scenario, int indent = 2);

/// Resolved run controls, with defaults filled from tau_max.
struct RunSettings {
    double T = 0.0;
    double h = 0.0;
    double tail_window = 0.0;
    ZetaSampling zeta;
};

/// T = 500 + 100 tau, h = default_step(tau), window = default_tail_window(tau).
[[nodiscard]] RunSettings resolve_run(const Scenario& scenario, double tau_max);

/// Numeric dotted paths: delta, t0, pairs.<i>.p, pairs.<i>.a,
/// overrides.<beta_inf|beta_sup|tau_max|zeta_M>, run.<T|h|tail_window|zeta_t_skip|zeta_t_hi>.
/// Pair indices start at 0.
[[nodiscard]] double get_parameter(const Scenario& scenario, std::string_view path);
void set_parameter(Scenario& scenario, std::string_view path, double value);

}  // namespace nicholson::lab
