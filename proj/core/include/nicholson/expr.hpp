#pragma once

// Small closed math language for time-dependent coefficients:
//   literals, t, pi, e, + - * / ^, unary -, and
//   sin cos abs exp log sqrt (one argument), min max (two or more).
// Precedence: ^ binds tighter than unary minus, which binds tighter than
// * and /, which bind tighter than + and -. ^ is right associative.

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nicholson {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position);

    /// Zero-based character offset into the source text.
    [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Raised by evaluation: log/sqrt outside their domain, division by zero,
/// fractional power of a negative base, or a non-finite intermediate.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Immutable compiled expression in the variable t. Copies share the
/// compiled program; evaluation is reentrant.
class TimeExpr {
public:
    /// The constant 0.
    TimeExpr();

    [[nodiscard]] static TimeExpr constant(double value);

    [[nodiscard]] double eval(double t) const;
    [[nodiscard]] double operator()(double t) const { return eval(t); }

    /// Source text as given to parse().
    [[nodiscard]] const std::string& source() const;

    /// Fully parenthesised rendering; parses back to an equivalent tree.
    [[nodiscard]] std::string to_string() const;

    /// True when the expression does not depend on t (after folding).
    [[nodiscard]] bool is_constant() const;
    [[nodiscard]] std::optional<double> constant_value() const;

    /// Functions of t whose sign changes mark points where the expression
    /// is not smooth: the argument of each abs, and for min/max the pairwise
    /// differences of the arguments. Constant ones are dropped.
    [[nodiscard]] std::vector<TimeExpr> switching_functions() const;

    struct Program;

private:
    explicit TimeExpr(std::shared_ptr<const Program> program);
    friend TimeExpr parse(std::string_view source);

    std::shared_ptr<const Program> program_;
};

[[nodiscard]] TimeExpr parse(std::string_view source);

[[nodiscard]] inline double eval(const TimeExpr& expr, double t) { return expr.eval(t); }

struct SampledRange {
    double lo;
    double hi;
};

/// Min and max of expr at n equally spaced points of [t_lo, t_hi]
/// (endpoints included). This is a sampled estimate, not a certified bound.
[[nodiscard]] SampledRange sample_bounds(const TimeExpr& expr, double t_lo, double t_hi,
                                         std::size_t n);

}  // namespace nicholson
