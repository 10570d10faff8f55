#include "nicholson/diffmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "nicholson/grid.hpp"

namespace nicholson {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string describe(double x, double mu_f) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "map undefined at x = %.17g: (1 - exp(-delta zeta)) f(x) = %.17g >= 1", x,
                  mu_f);
    return buf;
}

std::vector<double> normalised_weights(const Recruitment& f, double x) {
    const auto terms = f.terms();
    std::vector<double> logw(terms.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < terms.size(); ++j) {
        logw[j] = std::log(terms[j].p) - terms[j].a * x;
        top = std::max(top, logw[j]);
    }
    for (double& w : logw) w = std::exp(w - top);
    return logw;
}

double solve_theta_1(const Recruitment& f, double mu, double theta) {
    const double target = 1.0 / mu;
    // f(theta) < target is guaranteed by the caller; f decreases, so walk left.
    double hi = theta;
    double width = std::max(1.0, std::fabs(theta));
    double lo = theta - width;
    for (int i = 0; i < 2000 && f.value(lo) < target; ++i) {
        hi = lo;
        width *= 2.0;
        lo = theta - width;
    }
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (f.value(mid) >= target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::fabs(f.value(lo) - target) <= std::fabs(f.value(hi) - target) ? lo : hi;
}

}  // namespace

MapUndefined::MapUndefined(double x, double mu_f) : std::runtime_error(describe(x, mu_f)), x_(x), mu_f_(mu_f) {}

double MapSpec::well_defined_lhs() const { return mu * f.value(theta); }

MapSpec build_map(const Recruitment& f, double K, double zeta) {
    if (!(K > 0.0)) throw std::invalid_argument("build_map: K must be positive");
    if (!(zeta >= 0.0) || !std::isfinite(zeta)) throw std::invalid_argument("build_map: zeta must be finite and >= 0");
    MapSpec map{f, K, zeta, 0.0, 0.0, std::nullopt};
    const double dz = f.delta() * zeta;
    map.theta = K * std::exp(-dz);
    map.mu = -std::expm1(-dz);
    if (map.mu > 0.0) {
        const double lhs = map.well_defined_lhs();
        if (!(lhs < 1.0)) throw MapUndefined(map.theta, lhs);
        map.theta_1 = solve_theta_1(f, map.mu, map.theta);
    }
    return map;
}

MapSpec build_map(const NicholsonModel& model, double K, double zeta) {
    return build_map(Recruitment(model), K, zeta);
}

double h_eval(const MapSpec& map, double x, int order) {
    if (order < 0 || order > 1) throw std::invalid_argument("h_eval: order must be 0 or 1");
    if (x < map.theta) throw std::invalid_argument("h_eval: x is below theta");
    if (map.mu == 0.0) return order == 0 ? map.theta : 0.0;
    const double mu_f = map.mu * map.f.value(x);
    const double D = 1.0 - mu_f;
    if (!(D > 0.0)) throw MapUndefined(x, mu_f);
    if (order == 0) return map.theta / D;
    return map.theta * map.mu * map.f.derivative(x, 1) / (D * D);
}

MapDerivatives h_derivatives(const MapSpec& map, double x) {
    if (x < map.theta) throw std::invalid_argument("h_derivatives: x is below theta");
    MapDerivatives d;
    if (map.mu == 0.0) {
        d.h = map.theta;
        return d;
    }
    const double mu = map.mu;
    const double f0 = map.f.value(x);
    const double f1 = map.f.derivative(x, 1);
    const double f2 = map.f.derivative(x, 2);
    const double f3 = map.f.derivative(x, 3);
    const double D = 1.0 - mu * f0;
    if (!(D > 0.0)) throw MapUndefined(x, mu * f0);
    const double c = map.theta * mu;
    const double D2 = D * D;
    d.h = map.theta / D;
    d.d1 = c * f1 / D2;
    d.d2 = c * (f2 / D2 + 2.0 * mu * f1 * f1 / (D2 * D));
    d.d3 = c * (f3 / D2 + 6.0 * mu * f1 * f2 / (D2 * D) + 6.0 * mu * mu * f1 * f1 * f1 / (D2 * D2));
    return d;
}

double schwarzian_f(const Recruitment& f, double x) {
    // With nu_j = w_j a_j / S1: f''/f' = -mean(a), f'''/f' = mean(a^2), so
    // Sf = var(a) - mean(a)^2 / 2. A single term gives exactly -a^2/2.
    const auto terms = f.terms();
    const auto w = normalised_weights(f, x);
    double s1 = 0.0;
    for (std::size_t j = 0; j < terms.size(); ++j) s1 += w[j] * terms[j].a;
    double mean = 0.0;
    double var = 0.0;
    for (std::size_t j = 0; j < terms.size(); ++j) {
        const double nu = w[j] * terms[j].a / s1;
        mean += nu * terms[j].a;
    }
    for (std::size_t j = 0; j < terms.size(); ++j) {
        const double nu = w[j] * terms[j].a / s1;
        const double d = terms[j].a - mean;
        var += nu * d * d;
    }
    return var - 0.5 * mean * mean;
}

double schwarzian_f(const NicholsonModel& model, double x) { return schwarzian_f(Recruitment(model), x); }

double schwarzian_f_pairwise(const Recruitment& f, double x) {
    const auto terms = f.terms();
    const auto w = normalised_weights(f, x);
    double num = 0.0;
    double s1 = 0.0;
    for (std::size_t j = 0; j < terms.size(); ++j) {
        const double aj = terms[j].a;
        s1 += w[j] * aj;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const double ai = terms[i].a;
            num += w[j] * w[i] * aj * aj * ai * (2.0 * aj - 3.0 * ai);
        }
    }
    return num / (2.0 * s1 * s1);
}

double schwarzian_h(const MapSpec& map, double x) {
    const auto d = h_derivatives(map, x);
    if (d.d1 == 0.0) return kNaN;
    const double r = d.d2 / d.d1;
    return d.d3 / d.d1 - 1.5 * r * r;
}

std::vector<double> iterate(const MapSpec& map, double x0, std::size_t n) {
    std::vector<double> orbit;
    orbit.reserve(n + 1);
    orbit.push_back(x0);
    for (std::size_t k = 0; k < n; ++k) orbit.push_back(h_eval(map, orbit.back()));
    return orbit;
}

std::optional<ExpansiveInterval> expansive_interval_search(const MapSpec& map, double x_hi, std::size_t n_grid) {
    if (!(x_hi > map.theta)) throw std::invalid_argument("expansive_interval_search: x_hi must exceed theta");
    if (n_grid < 3) throw std::invalid_argument("expansive_interval_search: n_grid must be >= 3");
    const auto grid = mixed_grid(map.theta, x_hi, n_grid);
    std::vector<double> hv(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) hv[i] = h_eval(map, grid[i]);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        // d ranges over grid points in (c, h(c)]
        for (std::size_t k = i + 1; k < grid.size() && grid[k] <= hv[i]; ++k) {
            if (hv[k] <= grid[i]) return ExpansiveInterval{grid[i], grid[k]};
        }
    }
    return std::nullopt;
}

SchwarzianScan scan_schwarzian(const Recruitment& f, double lo, double hi, std::size_t n) {
    SchwarzianScan scan;
    scan.max = -std::numeric_limits<double>::infinity();
    scan.min = std::numeric_limits<double>::infinity();
    const auto grid = lo > 0.0 ? mixed_grid(lo, hi, n) : linspace(lo, hi, n);
    for (double x : grid) {
        const double s = schwarzian_f(f, x);
        ++scan.samples;
        if (s > scan.max) {
            scan.max = s;
            scan.argmax = x;
        }
        scan.min = std::min(scan.min, s);
    }
    return scan;
}

AttractorCheck attractor_check(const MapSpec& map, double x_hi, const AttractorOptions& options) {
    if (!(x_hi > map.theta)) throw std::invalid_argument("attractor_check: x_hi must exceed theta");
    AttractorCheck check;
    check.degenerate = map.degenerate();
    check.scan = scan_schwarzian(map.f, map.theta, x_hi, options.sf_grid);
    check.schwarzian = Verdict::compare("schwarzian_negative", check.scan.max, Relation::less, 0.0);
    check.schwarzian.with_input("grid", static_cast<double>(check.scan.samples)).with_input("argmax", check.scan.argmax);

    const double slope = h_eval(map, map.K, 1);
    if (check.degenerate) {
        check.slope = Verdict::compare("fixed_point_slope", 0.0, Relation::less_equal, 1.0);
        check.slope.with_flag("degenerate-constant-map");
        check.schwarzian.with_flag("degenerate-constant-map");
    } else if (!(slope < 0.0)) {
        check.slope = Verdict::compare("fixed_point_slope", std::fabs(slope), Relation::less_equal, 1.0);
        check.slope.status = Status::fails;
        check.slope.reason = "h'(K) is not negative";
    } else {
        check.slope = Verdict::compare("fixed_point_slope", std::fabs(slope), Relation::less_equal, 1.0);
    }
    check.slope.with_input("h_prime_K", slope);
    check.combined = check.degenerate ? Conjunction{Status::holds, true}
                                      : Conjunction::of({&check.schwarzian, &check.slope});

    const auto starts = mixed_grid(map.theta, x_hi, options.orbit_starts);
    check.orbits.starts = starts.size();
    for (double x0 : starts) {
        double x = x0;
        std::size_t it = 0;
        while (std::fabs(x - map.K) > options.tolerance && it < options.max_iterations) {
            x = h_eval(map, x);
            ++it;
        }
        const double dist = std::fabs(x - map.K);
        if (dist <= options.tolerance) ++check.orbits.converged;
        check.orbits.max_iterations_used = std::max(check.orbits.max_iterations_used, it);
        check.orbits.max_final_distance = std::max(check.orbits.max_final_distance, dist);
    }
    return check;
}

void write_orbit_csv(std::span<const double> orbit, std::ostream& out) {
    char buf[64];
    out << "n,x\n";
    for (std::size_t n = 0; n < orbit.size(); ++n) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", n, orbit[n]);
        out << buf;
    }
}

void write_cobweb_csv(std::span<const double> orbit, std::ostream& out) {
    char buf[96];
    out << "x_n,x_{n+1}\n";
    for (std::size_t n = 0; n + 1 < orbit.size(); ++n) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", orbit[n], orbit[n + 1]);
        out << buf;
    }
}

}  // namespace nicholson
