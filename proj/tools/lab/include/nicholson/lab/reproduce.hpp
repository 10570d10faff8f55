#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nicholson::lab {

struct ReproLine {
    std::string label;
    double reference = 0.0;  ///< value printed in the source example
    double computed = 0.0;
    double tolerance = 0.0;
    bool at_most = false;  ///< pass iff computed <= reference + tolerance
    bool pass = false;
};

/// Recomputes the published figures of a built-in example. nullopt for an
/// unknown id.
[[nodiscard]] std::optional<std::vector<ReproLine>> reproduce(std::string_view id);

}  // namespace nicholson::lab
