#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nicholson {

enum class Status { holds, fails, boundary, inapplicable };

[[nodiscard]] std::string_view to_string(Status s) noexcept;

/// The comparison a criterion asserts: lhs < rhs or lhs <= rhs.
enum class Relation { less, less_equal };

/// |rhs - lhs| at or below this is reported as boundary.
inline constexpr double kBoundaryTolerance = 1e-12;

struct Verdict {
    std::string name;
    Status status = Status::inapplicable;
    Relation relation = Relation::less_equal;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  ///< rhs - lhs
    std::string reason;   ///< set for inapplicable verdicts
    std::vector<std::string> flags;
    std::vector<std::pair<std::string, double>> inputs;

    /// holds, or boundary on a non-strict comparison.
    [[nodiscard]] bool passes() const noexcept;

    [[nodiscard]] static Verdict compare(std::string name, double lhs, Relation relation, double rhs);
    [[nodiscard]] static Verdict not_applicable(std::string name, std::string reason);

    Verdict& with_input(std::string key, double value);
    Verdict& with_flag(std::string flag);
};

/// Status of several verdicts that must all pass.
struct Conjunction {
    Status status = Status::inapplicable;
    bool passes = false;

    [[nodiscard]] static Conjunction of(std::initializer_list<const Verdict*> parts);
};

}  // namespace nicholson
