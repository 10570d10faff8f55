#include "nicholson/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <string>

#include "nicholson/grid.hpp"
#include "nicholson/quadrature.hpp"

namespace nicholson {

namespace {

inline double hermite(double x0, double dx0, double x1, double dx1, double s, double h) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * x0 + h10 * h * dx0 + h01 * x1 + h11 * h * dx1;
}

// Delayed-state lookup over history, accepted mesh and (during a step) the
// provisional cell [t_n, t_n + h].
class Lookup {
public:
    Lookup(double t0, double h, const TimeExpr& history, const std::vector<double>& x,
           const std::vector<double>& dx)
        : t0_(t0), h_(h), history_(history), x_(x), dx_(dx) {}

    double operator()(double s) {
        if (s <= t0_) return history_.eval(s);
        const std::size_t front = x_.size() - 1;
        const double u = (s - t0_) / h_;
        if (u <= static_cast<double>(front)) {
            const auto i = std::min(static_cast<std::size_t>(u), front - 1);
            return hermite(x_[i], dx_[i], x_[i + 1], dx_[i + 1], u - static_cast<double>(i), h_);
        }
        overlap_ = true;
        const double theta = u - static_cast<double>(front);
        if (provisional_) {
            return hermite(x_[front], dx_[front], right_x_, right_dx_, theta, h_);
        }
        if (front >= 1) {
            return hermite(x_[front - 1], dx_[front - 1], x_[front], dx_[front], 1.0 + theta, h_);
        }
        return x_[0] + (s - t0_) * dx_[0];
    }

    void note_delay(double d, double t) {
        if (!(d >= 0.0)) {
            throw DomainError("negative or undefined delay " + std::to_string(d) + " at t = " +
                              std::to_string(t));
        }
        tau_seen_ = std::max(tau_seen_, d);
    }

    void begin_step() {
        overlap_ = false;
        provisional_ = false;
    }
    void set_provisional(double x, double dx) {
        provisional_ = true;
        right_x_ = x;
        right_dx_ = dx;
    }
    [[nodiscard]] bool overlapped() const noexcept { return overlap_; }
    [[nodiscard]] double tau_seen() const noexcept { return tau_seen_; }

private:
    double t0_;
    double h_;
    const TimeExpr& history_;
    const std::vector<double>& x_;
    const std::vector<double>& dx_;
    bool overlap_ = false;
    bool provisional_ = false;
    double right_x_ = 0.0;
    double right_dx_ = 0.0;
    double tau_seen_ = 0.0;
};

class NonlinearSystem {
public:
    explicit NonlinearSystem(const NicholsonModel& model) : model_(model), buf_(model.pairs.size()) {}

    [[nodiscard]] double t0() const { return model_.t0; }
    static constexpr bool kPositive = true;

    double operator()(double t, double x, Lookup& lookup) {
        for (std::size_t j = 0; j < model_.pairs.size(); ++j) {
            const auto& pair = model_.pairs[j];
            const double dt = pair.tau.eval(t);
            const double ds = pair.sigma.eval(t);
            lookup.note_delay(dt, t);
            lookup.note_delay(ds, t);
            buf_[j] = {lookup(t - dt), lookup(t - ds)};
        }
        return rhs(model_, t, x, buf_);
    }

    [[nodiscard]] const TimeExpr& beta() const { return model_.beta; }
    [[nodiscard]] std::vector<const TimeExpr*> delays() const {
        std::vector<const TimeExpr*> out;
        for (const auto& pair : model_.pairs) {
            out.push_back(&pair.tau);
            out.push_back(&pair.sigma);
        }
        return out;
    }

private:
    const NicholsonModel& model_;
    std::vector<DelayedState> buf_;
};

class LinearSystem {
public:
    explicit LinearSystem(const LinearDelayModel& model) : model_(model), buf_(model.terms.size()) {}

    [[nodiscard]] double t0() const { return model_.t0; }
    static constexpr bool kPositive = false;

    double operator()(double t, double x, Lookup& lookup) {
        buf_[0] = x;
        for (std::size_t k = 1; k < model_.terms.size(); ++k) {
            const double d = model_.terms[k].delay.eval(t);
            lookup.note_delay(d, t);
            buf_[k] = lookup(t - d);
        }
        return rhs(model_, t, buf_);
    }

    [[nodiscard]] const TimeExpr& beta() const { return model_.beta; }
    [[nodiscard]] std::vector<const TimeExpr*> delays() const {
        std::vector<const TimeExpr*> out;
        for (std::size_t k = 1; k < model_.terms.size(); ++k) out.push_back(&model_.terms[k].delay);
        return out;
    }

private:
    const LinearDelayModel& model_;
    std::vector<double> buf_;
};

template <class System>
Trajectory run(System sys, const InitialHistory& history, double T, double h) {
    const double t0 = sys.t0();
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("integrate: step must be positive");
    if (!(T > t0)) throw std::invalid_argument("integrate: horizon T must exceed t0");
    const auto steps = static_cast<std::size_t>(std::ceil((T - t0) / h - 1e-9));

    std::vector<double> x;
    std::vector<double> dx;
    x.reserve(steps + 1);
    dx.reserve(steps + 1);
    Lookup lookup(t0, h, history.phi, x, dx);

    x.push_back(history.phi.eval(t0));
    dx.push_back(sys(t0, x[0], lookup));

    auto check = [&](double t, double v) {
        if constexpr (System::kPositive) {
            if (!(v > 0.0)) throw PositivityLoss(t, v);
        } else {
            if (!std::isfinite(v)) throw std::runtime_error("integrate: non-finite state at t = " + std::to_string(t));
        }
    };
    check(t0, x[0]);

    // Breakpoints, where the solution loses smoothness: a delayed argument
    // s - d(s) crossing t0, or a kink of beta or of a delay. Steps
    // containing one are split there.
    std::vector<std::function<double(double)>> switches;
    for (const TimeExpr* d : sys.delays()) {
        switches.emplace_back([d, t0](double s) { return s - d->eval(s) - t0; });
    }
    std::vector<TimeExpr> kinks = sys.beta().switching_functions();
    for (const TimeExpr* d : sys.delays()) {
        for (auto& k : d->switching_functions()) kinks.push_back(std::move(k));
    }
    for (const auto& k : kinks) switches.emplace_back([&k](double s) { return k.eval(s); });
    auto safe = [](const std::function<double(double)>& g, double s) {
        try {
            return g(s);
        } catch (const DomainError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    std::vector<double> offset(switches.size());
    for (std::size_t k = 0; k < switches.size(); ++k) offset[k] = safe(switches[k], t0);
    std::vector<double> breaks;

    for (std::size_t n = 0; n < steps; ++n) {
        const double tn = t0 + h * static_cast<double>(n);
        const double t_next = t0 + h * static_cast<double>(n + 1);
        const double xn = x[n];
        const double k1 = dx[n];

        breaks.clear();
        for (std::size_t k = 0; k < switches.size(); ++k) {
            const double next = safe(switches[k], t_next);
            if (std::isfinite(next) && std::isfinite(offset[k]) && (offset[k] > 0.0) != (next > 0.0)) {
                double lo = tn;
                double hi = t_next;
                const bool rising = next > 0.0;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    ((safe(switches[k], mid) > 0.0) == rising ? hi : lo) = mid;
                }
                const double r = 0.5 * (lo + hi);
                if (r > tn + 1e-9 * h && r < t_next - 1e-9 * h) breaks.push_back(r);
            }
            offset[k] = next;
        }
        std::sort(breaks.begin(), breaks.end());

        auto rk4 = [&](double a, double b, double xa, double ka) {
            const double w = b - a;
            const double m = a + 0.5 * w;
            const double k2 = sys(m, xa + 0.5 * w * ka, lookup);
            const double k3 = sys(m, xa + 0.5 * w * k2, lookup);
            const double k4 = sys(b, xa + w * k3, lookup);
            return xa + w / 6.0 * (ka + 2.0 * k2 + 2.0 * k3 + k4);
        };
        auto advance = [&] {
            double a = tn;
            double xa = xn;
            double ka = k1;
            for (const double b : breaks) {
                xa = rk4(a, b, xa, ka);
                ka = sys(b, xa, lookup);
                a = b;
            }
            return rk4(a, t_next, xa, ka);
        };

        lookup.begin_step();
        double x_next = advance();
        double dx_next;
        if (lookup.overlapped()) {
            // Predictor used extrapolation; correct against the predicted cell.
            lookup.set_provisional(x_next, k1);
            const double dx_pred = sys(t_next, x_next, lookup);
            lookup.set_provisional(x_next, dx_pred);
            x_next = advance();
            lookup.set_provisional(x_next, dx_pred);
            dx_next = sys(t_next, x_next, lookup);
        } else {
            dx_next = sys(t_next, x_next, lookup);
        }
        check(t_next, x_next);
        if (!std::isfinite(dx_next)) throw std::runtime_error("integrate: non-finite derivative at t = " + std::to_string(t_next));
        x.push_back(x_next);
        dx.push_back(dx_next);
    }
    return Trajectory(t0, h, history.phi, std::move(x), std::move(dx), lookup.tau_seen());
}

}  // namespace

PositivityLoss::PositivityLoss(double t, double value)
    : std::runtime_error("positivity lost at t = " + std::to_string(t) + " (x = " +
                         std::to_string(value) + "); reduce the step size"),
      t_(t) {}

Trajectory::Trajectory(double t0, double step, TimeExpr history, std::vector<double> values,
                       std::vector<double> derivatives, double tau_max)
    : t0_(t0), h_(step), history_(std::move(history)), x_(std::move(values)),
      dx_(std::move(derivatives)), tau_max_(tau_max) {
    if (!(h_ > 0.0)) throw std::invalid_argument("Trajectory: step must be positive");
    if (x_.empty() || x_.size() != dx_.size()) {
        throw std::invalid_argument("Trajectory: values and derivatives must be nonempty and of equal length");
    }
    for (std::size_t i = 0; i < x_.size(); ++i) {
        if (!std::isfinite(x_[i]) || !std::isfinite(dx_[i])) {
            throw std::invalid_argument("Trajectory: non-finite node value");
        }
    }
    if (!(tau_max_ >= 0.0)) throw std::invalid_argument("Trajectory: tau_max must be nonnegative");
}

double Trajectory::t_end() const noexcept { return time(x_.size() - 1); }

double Trajectory::interpolate(double t) const {
    const double tol = 1e-12 * std::max(1.0, std::fabs(t));
    if (t < t0_ - tau_max_ - tol || t > t_end() + tol) {
        throw std::out_of_range("Trajectory::interpolate: t = " + std::to_string(t) + " outside [" +
                                std::to_string(t0_ - tau_max_) + ", " + std::to_string(t_end()) + "]");
    }
    if (t <= t0_) return history_.eval(t);
    const double u = (t - t0_) / h_;
    const double nearest = std::round(u);
    if (std::fabs(u - nearest) < 1e-9) {
        return x_[std::min(static_cast<std::size_t>(nearest), x_.size() - 1)];
    }
    const std::size_t last = x_.size() - 1;
    const auto i = std::min(static_cast<std::size_t>(u), last - 1);
    return hermite(x_[i], dx_[i], x_[i + 1], dx_[i + 1], u - static_cast<double>(i), h_);
}

Trajectory integrate(const NicholsonModel& model, const InitialHistory& history, double T, double h) {
    return run(NonlinearSystem(model), history, T, h);
}

Trajectory integrate(const LinearDelayModel& model, const InitialHistory& history, double T, double h) {
    return run(LinearSystem(model), history, T, h);
}

double default_step(double tau_max) noexcept {
    return tau_max > 0.0 ? std::min(0.01, tau_max / 20.0) : 0.01;
}

double default_tail_window(double tau_max) noexcept { return std::max(100.0, 10.0 * tau_max); }

TailStats tail_extrema(const Trajectory& traj, double window) {
    if (!(window > 0.0) || !(window < traj.t_end() - traj.t_start())) {
        throw std::invalid_argument("tail_extrema: window must be positive and shorter than the run");
    }
    const double from = traj.t_end() - window - 1e-9 * std::max(1.0, std::fabs(traj.t_end()));
    TailStats stats{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), window};
    const auto x = traj.values();
    for (std::size_t i = x.size(); i-- > 0;) {
        if (traj.time(i) < from) break;
        stats.l_est = std::min(stats.l_est, x[i]);
        stats.L_est = std::max(stats.L_est, x[i]);
    }
    return stats;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    out << "t,x\n";
    char buf[64];
    const auto x = traj.values();
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", traj.time(i), x[i]);
        out << buf;
    }
}

ZetaSampling default_zeta_sampling(double t0, double tau_max) noexcept {
    const double scale = 1.0 + tau_max;
    const double t_skip = t0 + 50.0 * scale;
    return {t_skip, t_skip + 200.0 * scale, 20001};
}

DelayIntegrals delay_integral_sup(const NicholsonModel& model, std::optional<double> K, double t_skip,
                                  double t_hi, std::size_t n, std::optional<double> zeta_override) {
    if (!(t_skip < t_hi)) throw std::invalid_argument("delay_integral_sup: require t_skip < t_hi");
    if (n < 2) throw std::invalid_argument("delay_integral_sup: require at least 2 samples");

    const std::size_t m = model.pairs.size();
    std::vector<double> weight(m, std::numeric_limits<double>::quiet_NaN());
    double weight_sum = 0.0;
    if (K) {
        weight_sum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const auto& pair = model.pairs[j];
            weight[j] = pair.a * pair.p * std::exp(-pair.a * *K);
            weight_sum += weight[j];
        }
    }

    DelayIntegrals out;
    out.zeta_per_pair.assign(m, 0.0);
    double las = 0.0;
    for (const double t : linspace(t_skip, t_hi, n)) {
        double weighted = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double width = model.pairs[j].sigma.eval(t);
            if (width < 0.0) throw DomainError("negative delay sigma_j at t = " + std::to_string(t));
            const double I = width == 0.0 ? 0.0 : integrate_expr(model.beta, t - width, t, 1e-10);
            out.zeta_per_pair[j] = std::max(out.zeta_per_pair[j], I);
            if (K) weighted += weight[j] * I;
        }
        las = std::max(las, weighted);
    }
    out.zeta_M_sampled = *std::max_element(out.zeta_per_pair.begin(), out.zeta_per_pair.end());
    out.zeta_M = out.zeta_M_sampled;
    out.las_lhs = K ? las : std::numeric_limits<double>::quiet_NaN();
    if (zeta_override) {
        out.zeta_M = *zeta_override;
        out.estimated = false;
        if (K) {
            out.las_lhs = *zeta_override * weight_sum;
            out.las_from_override = true;
        }
    }
    return out;
}

}  // namespace nicholson
