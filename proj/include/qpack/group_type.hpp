#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qpack {

struct GroupCount {
  std::uint64_t size = 0;
  std::uint64_t multiplicity = 0;

  friend bool operator==(const GroupCount&, const GroupCount&) = default;
};

/// Group type (g_1^{a_1} ... g_r^{a_r} : s), optionally with one designated
/// group size g_0 that is counted among the entries.
class GroupType {
 public:
  GroupType() = default;
  GroupType(std::vector<GroupCount> entries, std::uint64_t stem,
            std::optional<std::uint64_t> special = std::nullopt);

  /// Parses "24^4 18^1:6" or "2^3:2"; a bare size means multiplicity 1.
  static GroupType parse(std::string_view text, std::optional<std::uint64_t> special = std::nullopt);

  const std::vector<GroupCount>& entries() const noexcept { return entries_; }
  std::uint64_t stem() const noexcept { return stem_; }
  const std::optional<std::uint64_t>& special() const noexcept { return special_; }

  std::uint64_t group_count() const noexcept;
  /// u: total number of non-stem points.
  std::uint64_t group_points() const noexcept;
  /// v = u + s.
  std::uint64_t points() const noexcept { return group_points() + stem_; }
  /// Group sizes expanded in entry order.
  std::vector<std::uint64_t> sizes() const;
  /// Entries with one copy of the designated group removed.
  std::vector<GroupCount> others() const;

  /// "(24^4 18^1:6)"
  std::string to_string() const;
  /// "24.24.24.24.18:6", group sizes in decreasing order.
  std::string signature() const;

  friend bool operator==(const GroupType&, const GroupType&) = default;

 private:
  std::vector<GroupCount> entries_;
  std::uint64_t stem_ = 0;
  std::optional<std::uint64_t> special_;
};

}  // namespace qpack
