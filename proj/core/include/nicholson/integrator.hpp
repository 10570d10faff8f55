#pragma once

// Method-of-steps integration of the nonlinear model and of its
// linearisation: fixed-step classical RK4 with cubic Hermite dense output.
//
// Delayed states x(s - d(s)) come from the initial history when the
// argument is at or before t0, from Hermite interpolation of the accepted
// mesh when it lies inside the computed range, and, when a delay is shorter
// than the step, from a predict/correct pass on the current step: the
// predictor extrapolates the last accepted cell, the corrector interpolates
// the predicted cell. Exactly two passes are made.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nicholson/expr.hpp"
#include "nicholson/model.hpp"

namespace nicholson {

class PositivityLoss : public std::runtime_error {
public:
    PositivityLoss(double t, double value);
    [[nodiscard]] double time() const noexcept { return t_; }

private:
    double t_;
};

class Trajectory {
public:
    /// values[i] and derivatives[i] are x and x' at t0 + i * step.
    Trajectory(double t0, double step, TimeExpr history, std::vector<double> values,
               std::vector<double> derivatives, double tau_max);

    [[nodiscard]] double t_start() const noexcept { return t0_; }
    [[nodiscard]] double t_end() const noexcept;
    [[nodiscard]] double step() const noexcept { return h_; }
    [[nodiscard]] double tau_max() const noexcept { return tau_max_; }
    [[nodiscard]] std::size_t size() const noexcept { return x_.size(); }
    [[nodiscard]] double time(std::size_t i) const noexcept { return t0_ + h_ * static_cast<double>(i); }
    [[nodiscard]] std::span<const double> values() const noexcept { return x_; }
    [[nodiscard]] std::span<const double> derivatives() const noexcept { return dx_; }
    [[nodiscard]] const TimeExpr& history() const noexcept { return history_; }

    /// History value for t <= t0, cubic Hermite on the containing cell
    /// otherwise. Throws std::out_of_range outside [t0 - tau_max, t_end].
    [[nodiscard]] double interpolate(double t) const;

private:
    double t0_;
    double h_;
    TimeExpr history_;
    std::vector<double> x_;
    std::vector<double> dx_;
    double tau_max_;
};

[[nodiscard]] inline double interpolate(const Trajectory& traj, double t) { return traj.interpolate(t); }

/// Integrates from model.t0 to the first mesh point at or after T.
/// Throws PositivityLoss when a node becomes nonpositive.
[[nodiscard]] Trajectory integrate(const NicholsonModel& model, const InitialHistory& history,
                                   double T, double h);

/// Linearised model; history is the perturbation u on [t0 - tau, t0].
[[nodiscard]] Trajectory integrate(const LinearDelayModel& model, const InitialHistory& history,
                                   double T, double h);

/// min(0.01, tau_max / 20) when tau_max > 0, else 0.01.
[[nodiscard]] double default_step(double tau_max) noexcept;
/// max(100, 10 * tau_max).
[[nodiscard]] double default_tail_window(double tau_max) noexcept;

struct TailStats {
    double l_est = 0.0;  ///< liminf estimate
    double L_est = 0.0;  ///< limsup estimate
    double window = 0.0;

    [[nodiscard]] double spread() const noexcept { return L_est - l_est; }
};

/// Min and max of the mesh values on [t_end - window, t_end].
[[nodiscard]] TailStats tail_extrema(const Trajectory& traj, double window);

/// Header "t,x", one row per mesh node, 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

struct ZetaSampling {
    double t_skip = 0.0;
    double t_hi = 0.0;
    std::size_t n = 0;
};

/// t_skip = t0 + 50 (1 + tau), t_hi = t_skip + 200 (1 + tau), n = 20001.
[[nodiscard]] ZetaSampling default_zeta_sampling(double t0, double tau_max) noexcept;

struct DelayIntegrals {
    std::vector<double> zeta_per_pair;  ///< sampled sup_t of int_{t - sigma_j(t)}^t beta
    double zeta_M = 0.0;                ///< value used downstream (override if given)
    double zeta_M_sampled = 0.0;        ///< max of zeta_per_pair
    /// sup_t of sum_j a_j p_j exp(-a_j K) * I_j(t); NaN without K. With a
    /// zeta override this is the bound zeta_M * sum_j a_j p_j exp(-a_j K).
    double las_lhs = 0.0;
    bool estimated = true;          ///< false when zeta_M came from an exact override
    bool las_from_override = false;
};

/// Samples I_j(t) = int_{t - sigma_j(t)}^t beta(s) ds at n points of
/// [t_skip, t_hi] by adaptive Simpson (tolerance 1e-10 per integral).
[[nodiscard]] DelayIntegrals delay_integral_sup(const NicholsonModel& model, std::optional<double> K,
                                                double t_skip, double t_hi, std::size_t n,
                                                std::optional<double> zeta_override = std::nullopt);

}  // namespace nicholson
