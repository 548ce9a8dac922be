#pragma once

// Read-only data files compiled into the library (construction tables,
// ingredient designs, recipes). Keys are paths relative to data/.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qpack {

namespace detail {
const std::map<std::string, std::string_view>& asset_table();
}

std::optional<std::string_view> embedded_asset(std::string_view name);

/// Names of all assets whose key starts with `prefix`, sorted.
std::vector<std::string> embedded_assets_with_prefix(std::string_view prefix);

}  // namespace qpack
