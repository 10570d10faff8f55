#include "nicholson/lab/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nicholson::lab {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (auto k : allowed) known |= item.key() == k;
        if (!known) throw ScenarioError(where.empty() ? item.key() : where + "." + item.key(), "unknown field");
    }
}

Number read_number(const json& v, const std::string& field) {
    if (v.is_number()) return Number::literal(v.get<double>());
    if (v.is_string()) {
        try {
            return Number::expression(v.get<std::string>());
        } catch (const ScenarioError& e) {
            throw ScenarioError(field, e.what());
        }
    }
    throw ScenarioError(field, "expected a number or a constant expression string");
}

std::optional<Number> read_optional_number(const json& obj, const char* key, const std::string& prefix) {
    if (!obj.contains(key)) return std::nullopt;
    return read_number(obj.at(key), prefix + key);
}

std::string read_expression(const json& v, const std::string& field) {
    if (!v.is_string()) throw ScenarioError(field, "expected an expression string");
    auto s = v.get<std::string>();
    try {
        (void)nicholson::parse(s);
    } catch (const nicholson::ParseError& e) {
        throw ScenarioError(field, e.what());
    }
    return s;
}

const json& require(const json& obj, const char* key, const std::string& field) {
    if (!obj.contains(key)) throw ScenarioError(field, "missing required field");
    return obj.at(key);
}

json write_number(const Number& n) {
    if (n.text.empty()) return n.value;
    return n.text;
}

TimeExpr compile(const std::string& source, const std::string& field) {
    try {
        return nicholson::parse(source);
    } catch (const nicholson::ParseError& e) {
        throw ScenarioError(field, e.what());
    }
}

Number* numeric_field(Scenario& s, std::string_view path, bool create) {
    auto optional_field = [&](std::optional<Number>& f) -> Number* {
        if (!f && create) f = Number::literal(0.0);
        return f ? &*f : nullptr;
    };
    if (path == "delta") return &s.delta;
    if (path == "t0") return optional_field(s.t0);
    if (path == "overrides.beta_inf") return optional_field(s.overrides.beta_inf);
    if (path == "overrides.beta_sup") return optional_field(s.overrides.beta_sup);
    if (path == "overrides.tau_max") return optional_field(s.overrides.tau_max);
    if (path == "overrides.zeta_M") return optional_field(s.overrides.zeta_M);
    if (path == "run.T") return optional_field(s.run.T);
    if (path == "run.h") return optional_field(s.run.h);
    if (path == "run.tail_window") return optional_field(s.run.tail_window);
    if (path == "run.zeta_t_skip") return optional_field(s.run.zeta_t_skip);
    if (path == "run.zeta_t_hi") return optional_field(s.run.zeta_t_hi);
    constexpr std::string_view prefix = "pairs.";
    if (path.substr(0, prefix.size()) == prefix) {
        const auto rest = path.substr(prefix.size());
        const auto dot = rest.find('.');
        if (dot == std::string_view::npos) throw ScenarioError(std::string(path), "expected pairs.<index>.<p|a>");
        std::size_t idx = 0;
        const auto digits = rest.substr(0, dot);
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
        if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
            throw ScenarioError(std::string(path), "invalid pair index");
        }
        if (idx >= s.pairs.size()) throw ScenarioError(std::string(path), "pair index out of range");
        const auto leaf = rest.substr(dot + 1);
        if (leaf == "p") return &s.pairs[idx].p;
        if (leaf == "a") return &s.pairs[idx].a;
        throw ScenarioError(std::string(path), "only p and a are numeric pair fields");
    }
    throw ScenarioError(std::string(path), "not a numeric scenario field");
}

}  // namespace

ScenarioError::ScenarioError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

Number Number::expression(std::string source) {
    TimeExpr e;
    try {
        e = nicholson::parse(source);
    } catch (const nicholson::ParseError& err) {
        throw ScenarioError("", err.what());
    } catch (const nicholson::DomainError& err) {
        throw ScenarioError("", err.what());
    }
    if (!e.is_constant()) throw ScenarioError("", "expression must not depend on t");
    return {*e.constant_value(), std::move(source)};
}

NicholsonModel Scenario::model() const {
    NicholsonModel m;
    m.delta = delta.value;
    m.beta = compile(beta, "beta");
    m.t0 = start_time();
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        const std::string where = "pairs[" + std::to_string(j) + "]";
        m.pairs.push_back({pairs[j].p.value, pairs[j].a.value, compile(pairs[j].tau, where + ".tau"),
                           compile(pairs[j].sigma, where + ".sigma")});
    }
    return m;
}

InitialHistory Scenario::initial_history() const { return {compile(history.value_or("1"), "history")}; }

BoundOverrides Scenario::bound_overrides() const {
    BoundOverrides b;
    if (overrides.beta_inf) b.beta_inf = overrides.beta_inf->value;
    if (overrides.beta_sup) b.beta_sup = overrides.beta_sup->value;
    if (overrides.tau_max) b.tau_max = overrides.tau_max->value;
    if (overrides.zeta_M) b.zeta_M = overrides.zeta_M->value;
    return b;
}

Scenario parse_scenario(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError("<document>", e.what());
    }
    if (!root.is_object()) throw ScenarioError("<document>", "expected a JSON object");
    reject_unknown(root, "", {"name", "description", "delta", "beta", "t0", "pairs", "history", "overrides", "run"});

    Scenario s;
    if (root.contains("name")) {
        if (!root["name"].is_string()) throw ScenarioError("name", "expected a string");
        s.name = root["name"].get<std::string>();
    }
    if (root.contains("description")) {
        if (!root["description"].is_string()) throw ScenarioError("description", "expected a string");
        s.description = root["description"].get<std::string>();
    }
    s.delta = read_number(require(root, "delta", "delta"), "delta");
    s.beta = read_expression(require(root, "beta", "beta"), "beta");
    s.t0 = read_optional_number(root, "t0", "");
    if (root.contains("history")) s.history = read_expression(root["history"], "history");

    const json& pairs = require(root, "pairs", "pairs");
    if (!pairs.is_array() || pairs.empty()) throw ScenarioError("pairs", "expected a non-empty array");
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        const std::string where = "pairs[" + std::to_string(j) + "]";
        const json& pj = pairs[j];
        if (!pj.is_object()) throw ScenarioError(where, "expected an object");
        reject_unknown(pj, where, {"p", "a", "tau", "sigma"});
        PairSpec spec;
        spec.p = read_number(require(pj, "p", where + ".p"), where + ".p");
        spec.a = read_number(require(pj, "a", where + ".a"), where + ".a");
        spec.tau = read_expression(require(pj, "tau", where + ".tau"), where + ".tau");
        spec.sigma = read_expression(require(pj, "sigma", where + ".sigma"), where + ".sigma");
        s.pairs.push_back(std::move(spec));
    }

    if (root.contains("overrides")) {
        const json& o = root["overrides"];
        if (!o.is_object()) throw ScenarioError("overrides", "expected an object");
        reject_unknown(o, "overrides", {"beta_inf", "beta_sup", "tau_max", "zeta_M"});
        s.overrides.beta_inf = read_optional_number(o, "beta_inf", "overrides.");
        s.overrides.beta_sup = read_optional_number(o, "beta_sup", "overrides.");
        s.overrides.tau_max = read_optional_number(o, "tau_max", "overrides.");
        s.overrides.zeta_M = read_optional_number(o, "zeta_M", "overrides.");
    }
    if (root.contains("run")) {
        const json& r = root["run"];
        if (!r.is_object()) throw ScenarioError("run", "expected an object");
        reject_unknown(r, "run", {"T", "h", "tail_window", "zeta_t_skip", "zeta_t_hi", "zeta_samples"});
        s.run.T = read_optional_number(r, "T", "run.");
        s.run.h = read_optional_number(r, "h", "run.");
        s.run.tail_window = read_optional_number(r, "tail_window", "run.");
        s.run.zeta_t_skip = read_optional_number(r, "zeta_t_skip", "run.");
        s.run.zeta_t_hi = read_optional_number(r, "zeta_t_hi", "run.");
        if (r.contains("zeta_samples")) {
            const json& n = r["zeta_samples"];
            if (!n.is_number_unsigned() || n.get<std::size_t>() < 2) {
                throw ScenarioError("run.zeta_samples", "expected an integer >= 2");
            }
            s.run.zeta_samples = n.get<std::size_t>();
        }
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("<file>", "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize(const Scenario& s, int indent) {
    json root;
    if (s.name) root["name"] = *s.name;
    if (s.description) root["description"] = *s.description;
    root["delta"] = write_number(s.delta);
    root["beta"] = s.beta;
    if (s.t0) root["t0"] = write_number(*s.t0);
    json pairs = json::array();
    for (const auto& p : s.pairs) {
        pairs.push_back({{"p", write_number(p.p)}, {"a", write_number(p.a)}, {"tau", p.tau}, {"sigma", p.sigma}});
    }
    root["pairs"] = pairs;
    if (s.history) root["history"] = *s.history;
    if (!s.overrides.empty()) {
        json o = json::object();
        if (s.overrides.beta_inf) o["beta_inf"] = write_number(*s.overrides.beta_inf);
        if (s.overrides.beta_sup) o["beta_sup"] = write_number(*s.overrides.beta_sup);
        if (s.overrides.tau_max) o["tau_max"] = write_number(*s.overrides.tau_max);
        if (s.overrides.zeta_M) o["zeta_M"] = write_number(*s.overrides.zeta_M);
        root["overrides"] = o;
    }
    if (!s.run.empty()) {
        json r = json::object();
        if (s.run.T) r["T"] = write_number(*s.run.T);
        if (s.run.h) r["h"] = write_number(*s.run.h);
        if (s.run.tail_window) r["tail_window"] = write_number(*s.run.tail_window);
        if (s.run.zeta_t_skip) r["zeta_t_skip"] = write_number(*s.run.zeta_t_skip);
        if (s.run.zeta_t_hi) r["zeta_t_hi"] = write_number(*s.run.zeta_t_hi);
        if (s.run.zeta_samples) r["zeta_samples"] = *s.run.zeta_samples;
        root["run"] = r;
    }
    return root.dump(indent) + "\n";
}

RunSettings resolve_run(const Scenario& s, double tau_max) {
    RunSettings r;
    const double t0 = s.start_time();
    r.T = s.run.T ? s.run.T->value : t0 + 500.0 + 100.0 * tau_max;
    r.h = s.run.h ? s.run.h->value : default_step(tau_max);
    r.tail_window = s.run.tail_window ? s.run.tail_window->value : default_tail_window(tau_max);
    r.zeta = default_zeta_sampling(t0, tau_max);
    if (s.run.zeta_t_skip) r.zeta.t_skip = s.run.zeta_t_skip->value;
    if (s.run.zeta_t_hi) r.zeta.t_hi = s.run.zeta_t_hi->value;
    if (s.run.zeta_samples) r.zeta.n = *s.run.zeta_samples;
    return r;
}

double get_parameter(const Scenario& scenario, std::string_view path) {
    auto& s = const_cast<Scenario&>(scenario);
    const Number* n = numeric_field(s, path, false);
    if (!n) throw ScenarioError(std::string(path), "field is not set");
    return n->value;
}

void set_parameter(Scenario& scenario, std::string_view path, double value) {
    *numeric_field(scenario, path, true) = Number::literal(value);
}

}  // namespace nicholson::lab
