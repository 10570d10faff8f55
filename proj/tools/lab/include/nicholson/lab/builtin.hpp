#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nicholson/lab/scenario.hpp"

namespace nicholson::lab {

/// Two-pair examples: "3.9" (K = 5) and "3.10" (K not in closed form).
/// Both use beta = 1 + sin(t)^2 and tau_j = sigma_j = |cos(j t)|.
[[nodiscard]] std::optional<Scenario> builtin_scenario(std::string_view id);
[[nodiscard]] std::vector<std::string> builtin_ids();

}  // namespace nicholson::lab
