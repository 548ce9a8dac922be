#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qpack {

/// A t x t partial matrix of difference labels over Z_m. Indices are 1-based
/// to match the x_1..x_t naming of the infinite points.
class FactorArray {
 public:
  FactorArray() = default;
  FactorArray(std::size_t t, std::uint32_t modulus);

  std::size_t side() const noexcept { return t_; }
  std::uint32_t modulus() const noexcept { return m_; }

  const std::optional<std::uint32_t>& at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, std::optional<std::uint32_t> value);

  /// A label is usable when it names a difference class: 1..m-1.
  bool is_valid_label(std::uint32_t label) const noexcept { return label >= 1 && label < m_; }

  friend bool operator==(const FactorArray&, const FactorArray&) = default;

 private:
  std::size_t t_ = 0;
  std::uint32_t m_ = 0;
  std::vector<std::optional<std::uint32_t>> cells_;
};

struct ArrayRepair {
  std::size_t row = 0;
  std::size_t col = 0;
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  std::string reason = "transpose entry";
  std::string describe() const;
};

/// Replaces every invalid label in the consumed upper triangle (i < j) by its
/// transpose entry, when that entry is present and valid. Returns the repairs.
std::vector<ArrayRepair> repair_upper_triangle(FactorArray& array);

/// A diagonal entry names the half of a difference class left uncovered at
/// x_i. When that label is also consumed by a cross block through x_i (in
/// `used_pairs`) while its complement m - label is not, the entry is replaced
/// by the complement. Returns the repairs.
std::vector<ArrayRepair> repair_diagonal_complements(
    FactorArray& array, const std::vector<std::pair<std::size_t, std::size_t>>& used_pairs);

}  // namespace qpack
