#pragma once

#include <string>

#include "nicholson/criteria.hpp"
#include "nicholson/verdict.hpp"

namespace nicholson {

/// Non-finite numbers are written as the strings "nan", "inf", "-inf".
/// Each verdict also carries a "display" object rounded to 6 significant
/// digits. Key order is fixed, so output is byte-stable.
[[nodiscard]] std::string verdict_to_json(const Verdict& verdict, int indent = 2);
[[nodiscard]] std::string report_to_json(const CriteriaReport& report, int indent = 2);

}  // namespace nicholson
