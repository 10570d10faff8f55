#pragma once

// The auxiliary decreasing map h(x) = theta / (1 - mu f(x)) with
// theta = K exp(-delta zeta) and mu = 1 - exp(-delta zeta), its Schwarzian
// derivative, orbits, and grid searches for expansive intervals.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nicholson/equilibria.hpp"
#include "nicholson/model.hpp"
#include "nicholson/verdict.hpp"

namespace nicholson {

/// mu f(x) >= 1 somewhere the map is evaluated.
class MapUndefined : public std::runtime_error {
public:
    MapUndefined(double x, double mu_f);
    [[nodiscard]] double x() const noexcept { return x_; }
    [[nodiscard]] double mu_f() const noexcept { return mu_f_; }

private:
    double x_;
    double mu_f_;
};

struct MapSpec {
    Recruitment f;
    double K = 0.0;
    double zeta = 0.0;
    double theta = 0.0;
    double mu = 0.0;
    std::optional<double> theta_1;  ///< f(theta_1) = 1/mu; none when mu = 0

    [[nodiscard]] bool degenerate() const noexcept { return mu == 0.0; }
    /// mu f(theta); the map is well-defined on [theta, inf) iff this is < 1.
    [[nodiscard]] double well_defined_lhs() const;
};

/// Throws MapUndefined when mu f(theta) >= 1.
[[nodiscard]] MapSpec build_map(const Recruitment& f, double K, double zeta);
[[nodiscard]] MapSpec build_map(const NicholsonModel& model, double K, double zeta);

/// order 0: h(x); order 1: h'(x) = theta mu f'(x) / (1 - mu f(x))^2.
[[nodiscard]] double h_eval(const MapSpec& map, double x, int order = 0);

struct MapDerivatives {
    double h = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
};

[[nodiscard]] MapDerivatives h_derivatives(const MapSpec& map, double x);

/// f'''/f' - 1.5 (f''/f')^2 from weight-normalised moments (no underflow at
/// large x).
[[nodiscard]] double schwarzian_f(const Recruitment& f, double x);
[[nodiscard]] double schwarzian_f(const NicholsonModel& model, double x);

/// Same quantity as the pairwise sum
/// sum_{j,i} w_j w_i a_j^2 a_i (2 a_j - 3 a_i) / (2 (sum_j w_j a_j)^2),
/// w_j = p_j exp(-a_j x).
[[nodiscard]] double schwarzian_f_pairwise(const Recruitment& f, double x);

/// Schwarzian of h from its own closed-form derivatives. NaN when h' = 0.
[[nodiscard]] double schwarzian_h(const MapSpec& map, double x);

/// x0, h(x0), ..., h^n(x0).
[[nodiscard]] std::vector<double> iterate(const MapSpec& map, double x0, std::size_t n);

struct ExpansiveInterval {
    double c = 0.0;
    double d = 0.0;
};

/// First grid pair c < d with h(d) <= c and h(c) >= d. The grid is mixed
/// (uniform plus geometric) on [theta, x_hi] with n_grid points.
[[nodiscard]] std::optional<ExpansiveInterval> expansive_interval_search(const MapSpec& map, double x_hi,
                                                                         std::size_t n_grid);

struct SchwarzianScan {
    std::size_t samples = 0;
    double max = 0.0;
    double argmax = 0.0;
    double min = 0.0;
};

/// Sf on the interior of a mixed grid over [lo, hi].
[[nodiscard]] SchwarzianScan scan_schwarzian(const Recruitment& f, double lo, double hi, std::size_t n);

struct AttractorOptions {
    std::size_t sf_grid = 10001;
    std::size_t orbit_starts = 101;
    double tolerance = 1e-6;
    std::size_t max_iterations = 200000;
};

struct OrbitSummary {
    std::size_t starts = 0;
    std::size_t converged = 0;
    std::size_t max_iterations_used = 0;
    double max_final_distance = 0.0;
};

struct AttractorCheck {
    Verdict schwarzian;  ///< max sampled Sf < 0
    Verdict slope;       ///< |h'(K)| <= 1 with h'(K) < 0
    Conjunction combined;
    SchwarzianScan scan;
    OrbitSummary orbits;
    bool degenerate = false;

    [[nodiscard]] bool corroborated() const noexcept { return orbits.converged == orbits.starts; }
};

/// Checks Sf < 0 on (theta, x_hi) and -1 <= h'(K) < 0, then iterates from
/// orbit_starts points of [theta, x_hi].
[[nodiscard]] AttractorCheck attractor_check(const MapSpec& map, double x_hi, const AttractorOptions& options = {});

/// Header "n,x".
void write_orbit_csv(std::span<const double> orbit, std::ostream& out);
/// Header "x_n,x_{n+1}".
void write_cobweb_csv(std::span<const double> orbit, std::ostream& out);

}  // namespace nicholson
