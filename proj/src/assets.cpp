#include "qpack/assets.hpp"

namespace qpack {

std::optional<std::string_view> embedded_asset(std::string_view name) {
  const auto& table = detail::asset_table();
  auto it = table.find(std::string(name));
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> embedded_assets_with_prefix(std::string_view prefix) {
  std::vector<std::string> out;
  for (const auto& [key, value] : detail::asset_table()) {
    if (key.starts_with(prefix)) out.push_back(key);
  }
  return out;
}

}  // namespace qpack
