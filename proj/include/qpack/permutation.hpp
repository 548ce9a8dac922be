#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qpack/core.hpp"

namespace qpack {

/// A permutation of 0..degree-1 given by disjoint cycles; unlisted points are fixed.
class PermutationSpec {
 public:
  PermutationSpec() = default;
  /// Throws InvalidPoint if cycles overlap or leave 0..degree-1.
  PermutationSpec(std::uint32_t degree, std::vector<std::vector<Point>> cycles);

  /// Parses "(0 1)(2 3 4)".
  static PermutationSpec parse(std::uint32_t degree, std::string_view text);

  std::uint32_t degree() const noexcept { return static_cast<std::uint32_t>(image_.size()); }
  const std::vector<std::vector<Point>>& cycles() const noexcept { return cycles_; }
  Point operator()(Point p) const { return image_.at(p); }
  Block operator()(const Block& b) const;
  /// lcm of the cycle lengths.
  std::uint64_t order() const;
  bool is_identity() const noexcept;

  std::string to_string() const;

  friend bool operator==(const PermutationSpec& a, const PermutationSpec& b) {
    return a.image_ == b.image_;
  }

 private:
  std::vector<std::vector<Point>> cycles_;
  std::vector<Point> image_;
};

}  // namespace qpack
