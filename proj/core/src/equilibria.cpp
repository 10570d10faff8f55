#include "nicholson/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nicholson {

namespace {

std::vector<Recruitment::Term> terms_of(const NicholsonModel& model) {
    std::vector<Recruitment::Term> terms;
    terms.reserve(model.pairs.size());
    for (const auto& pair : model.pairs) terms.push_back({pair.p, pair.a});
    return terms;
}

constexpr std::size_t kMaxBisections = 200;
constexpr int kMaxDoublings = 1000;

}  // namespace

Recruitment::Recruitment(double delta, std::vector<Term> terms)
    : delta_(delta), terms_(std::move(terms)) {
    if (!(delta_ > 0.0)) throw std::invalid_argument("Recruitment: delta must be positive");
    if (terms_.empty()) throw std::invalid_argument("Recruitment: at least one term is required");
}

Recruitment::Recruitment(const NicholsonModel& model) : Recruitment(model.delta, terms_of(model)) {}

double Recruitment::derivative(double x, int order) const {
    if (order < 0 || order > 3) throw std::invalid_argument("Recruitment: derivative order must be 0..3");
    double s = 0.0;
    for (const auto& term : terms_) {
        double c = term.p;
        for (int k = 0; k < order; ++k) c *= -term.a;
        s += c * std::exp(-term.a * x);
    }
    return s / delta_;
}

double Recruitment::total() const noexcept {
    double p = 0.0;
    for (const auto& term : terms_) p += term.p;
    return p;
}

double Recruitment::a_plus() const noexcept {
    double a = terms_.front().a;
    for (const auto& term : terms_) a = std::max(a, term.a);
    return a;
}

double Recruitment::a_minus() const noexcept {
    double a = terms_.front().a;
    for (const auto& term : terms_) a = std::min(a, term.a);
    return a;
}

double f_eval(const NicholsonModel& model, double x, int order) {
    return Recruitment(model).derivative(x, order);
}

EquilibriumResult carrying_capacity(const Recruitment& f) {
    const double p = f.total();
    if (!(p > f.delta())) {
        throw NoPositiveEquilibrium("no positive equilibrium: sum of p_j (" + std::to_string(p) +
                                    ") does not exceed delta (" + std::to_string(f.delta()) + ")");
    }

    double lo = 0.0;
    double hi = 1.0;
    int doublings = 0;
    while (f.value(hi) >= 1.0) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > kMaxDoublings) throw std::runtime_error("carrying_capacity: bracket search failed");
    }

    EquilibriumResult result;
    while (result.iterations < kMaxBisections) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        ++result.iterations;
        if (f.value(mid) > 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double r_lo = std::fabs(f.value(lo) - 1.0);
    const double r_hi = std::fabs(f.value(hi) - 1.0);
    result.K = r_lo < r_hi ? lo : hi;
    result.residual = std::min(r_lo, r_hi);

    if (f.terms().size() == 1) {
        const auto& term = f.terms().front();
        const double closed = std::log(term.p / f.delta()) / term.a;
        result.closed_form = closed;
        if (std::fabs(closed - result.K) > 1e-10 * std::max(1.0, closed)) {
            throw std::logic_error("carrying_capacity: bisection disagrees with the closed form");
        }
    }
    return result;
}

EquilibriumResult carrying_capacity(const NicholsonModel& model) {
    if (model.pairs.empty()) throw std::invalid_argument("carrying_capacity: model has no delay pairs");
    if (!(model.delta > 0.0)) throw std::invalid_argument("carrying_capacity: delta must be positive");
    return carrying_capacity(Recruitment(model));
}

}  // namespace nicholson
