#include "nicholson/lab/builtin.hpp"

namespace nicholson::lab {

namespace {

Scenario two_pair(std::string name, Number delta, Number p1, Number p2) {
    Scenario s;
    s.name = std::move(name);
    s.delta = std::move(delta);
    s.beta = "1 + sin(t)^2";
    s.t0 = Number::literal(0.0);
    s.pairs.push_back({std::move(p1), Number::expression("4/5"), "abs(cos(t))", "abs(cos(t))"});
    s.pairs.push_back({std::move(p2), Number::literal(1.0), "abs(cos(2*t))", "abs(cos(2*t))"});
    s.history = "1";
    s.overrides.beta_inf = Number::literal(1.0);
    s.overrides.beta_sup = Number::literal(2.0);
    s.overrides.tau_max = Number::literal(1.0);
    return s;
}

}  // namespace

std::optional<Scenario> builtin_scenario(std::string_view id) {
    if (id == "3.9") {
        return two_pair("example-3.9", Number::literal(0.1), Number::expression("3/50*exp(4)"),
                        Number::expression("1/25*exp(5)"));
    }
    if (id == "3.10") {
        return two_pair("example-3.10", Number::literal(0.09), Number::expression("3/50"),
                        Number::expression("1/25"));
    }
    return std::nullopt;
}

std::vector<std::string> builtin_ids() { return {"3.9", "3.10"}; }

}  // namespace nicholson::lab
