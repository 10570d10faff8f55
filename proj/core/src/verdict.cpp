#include "nicholson/verdict.hpp"

#include <cmath>

namespace nicholson {

std::string_view to_string(Status s) noexcept {
    switch (s) {
        case Status::holds: return "holds";
        case Status::fails: return "fails";
        case Status::boundary: return "boundary";
        case Status::inapplicable: return "inapplicable";
    }
    return "inapplicable";
}

bool Verdict::passes() const noexcept {
    return status == Status::holds || (status == Status::boundary && relation == Relation::less_equal);
}

Verdict Verdict::compare(std::string name, double lhs, Relation relation, double rhs) {
    Verdict v;
    v.name = std::move(name);
    v.relation = relation;
    v.lhs = lhs;
    v.rhs = rhs;
    if (std::isnan(lhs) || std::isnan(rhs)) {
        v.status = Status::inapplicable;
        v.margin = std::nan("");
        v.reason = "non-finite input";
        return v;
    }
    v.margin = rhs - lhs;
    if (std::isnan(v.margin)) {
        // both infinite with the same sign
        v.status = Status::boundary;
    } else if (std::fabs(v.margin) <= kBoundaryTolerance) {
        v.status = Status::boundary;
    } else {
        v.status = v.margin > 0.0 ? Status::holds : Status::fails;
    }
    return v;
}

Verdict Verdict::not_applicable(std::string name, std::string reason) {
    Verdict v;
    v.name = std::move(name);
    v.status = Status::inapplicable;
    v.lhs = v.rhs = v.margin = std::nan("");
    v.reason = std::move(reason);
    return v;
}

Verdict& Verdict::with_input(std::string key, double value) {
    inputs.emplace_back(std::move(key), value);
    return *this;
}

Verdict& Verdict::with_flag(std::string flag) {
    flags.push_back(std::move(flag));
    return *this;
}

Conjunction Conjunction::of(std::initializer_list<const Verdict*> parts) {
    Conjunction c;
    bool any_inapplicable = false;
    bool any_fail = false;
    bool any_boundary = false;
    bool all_pass = true;
    for (const Verdict* v : parts) {
        any_inapplicable |= v->status == Status::inapplicable;
        any_fail |= v->status == Status::fails;
        any_boundary |= v->status == Status::boundary;
        all_pass &= v->passes();
    }
    if (any_inapplicable) {
        c.status = Status::inapplicable;
    } else if (any_fail) {
        c.status = Status::fails;
    } else if (any_boundary) {
        c.status = Status::boundary;
    } else {
        c.status = Status::holds;
    }
    c.passes = !any_inapplicable && all_pass;
    return c;
}

}  // namespace nicholson
