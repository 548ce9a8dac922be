#pragma once

// Points, blocks, triples and the two design containers every other module
// consumes. Points of an n-point design are always labelled 0..n-1.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpack/error.hpp"
#include "qpack/group_type.hpp"

namespace qpack {

using Point = std::uint32_t;

/// A 3-subset of points, stored in increasing order.
class Triple {
 public:
  Triple(Point a, Point b, Point c);

  const std::array<Point, 3>& points() const noexcept { return p_; }
  Point operator[](std::size_t i) const noexcept { return p_[i]; }
  bool contains(Point x) const noexcept { return p_[0] == x || p_[1] == x || p_[2] == x; }

  friend auto operator<=>(const Triple&, const Triple&) = default;

 private:
  std::array<Point, 3> p_;
};

/// A 4-subset of points, stored in increasing order. Equality is set equality.
class Block {
 public:
  Block(Point a, Point b, Point c, Point d);
  explicit Block(std::array<Point, 4> points);

  const std::array<Point, 4>& points() const noexcept { return p_; }
  Point operator[](std::size_t i) const noexcept { return p_[i]; }
  bool contains(Point x) const noexcept;
  /// Number of the block's points that lie in `sorted_set`.
  std::size_t meet(std::span<const Point> sorted_set) const noexcept;
  std::string to_string() const;

  friend auto operator<=>(const Block&, const Block&) = default;

 private:
  std::array<Point, 4> p_;
};

/// The four 3-subsets of a block, each sorted.
std::array<Triple, 4> block_triples(const Block& b);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);
inline std::uint64_t triple_count(std::uint32_t n) { return binomial(n, 3); }

/// Colex rank C(c,3)+C(b,2)+a of {a<b<c}; bijective onto 0..C(n,3)-1.
/// Throws InvalidPoint if a point is >= n.
std::uint64_t rank_triple(const Triple& t, std::uint32_t n);
/// Unchecked variant for hot loops where all points are known to be valid.
inline std::uint64_t rank_triple_unchecked(Point a, Point b, Point c) noexcept {
  return std::uint64_t{c} * (c - 1) * (c - 2) / 6 + std::uint64_t{b} * (b - 1) / 2 + a;
}
Triple unrank_triple(std::uint64_t rank, std::uint32_t n);

/// Point set Z_m followed by t fixed "infinite" points x_1..x_t.
/// Residue j has label j; x_i has label m + i - 1.
struct MixedPoints {
  std::uint32_t modulus = 0;
  std::uint32_t infinite = 0;

  std::uint32_t size() const noexcept { return modulus + infinite; }
  bool is_infinite(Point p) const noexcept { return p >= modulus; }
};

struct MixedName {
  enum class Kind { Residue, Infinite };
  Kind kind = Kind::Residue;
  /// residue value j, or 1-based infinite index i
  std::uint32_t index = 0;

  static MixedName residue(std::uint32_t j) { return {Kind::Residue, j}; }
  static MixedName infinite(std::uint32_t i) { return {Kind::Infinite, i}; }
};

Point mixed_point_label(const MixedPoints& spec, MixedName name);
/// Parses "17" as a residue and "x3" as the third infinite point.
MixedName parse_mixed_name(std::string_view token);
std::string mixed_point_name(const MixedPoints& spec, Point p);

enum class DesignKind { PQS, MPQSClaimed, HPQSClaimed };

std::string_view to_string(DesignKind kind);

/// A candidate 3-(n,4,1) packing: blocks are structurally valid and distinct.
/// Whether triples are covered at most once is checked by verify, not here.
class PackingDesign {
 public:
  PackingDesign() = default;
  /// Throws InvalidPoint or DuplicateBlock.
  PackingDesign(std::uint32_t n, std::vector<Block> blocks,
                std::optional<std::vector<Point>> hole = std::nullopt,
                DesignKind kind = DesignKind::PQS);

  std::uint32_t n() const noexcept { return n_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const std::optional<std::vector<Point>>& hole() const noexcept { return hole_; }
  DesignKind kind() const noexcept { return kind_; }

  void set_kind(DesignKind kind) noexcept { kind_ = kind; }
  /// Blocks in lexicographic order, as written to design files.
  PackingDesign canonical() const;

  friend bool operator==(const PackingDesign&, const PackingDesign&) = default;

 private:
  std::uint32_t n_ = 0;
  std::vector<Block> blocks_;
  std::optional<std::vector<Point>> hole_;
  DesignKind kind_ = DesignKind::PQS;
};

/// Groups + stem + blocks. Groups and stem partition 0..v-1.
class CandelabraSystem {
 public:
  CandelabraSystem() = default;
  /// Throws InvalidPoint/InvalidBlock when groups and stem do not partition
  /// the point set or a block uses an unknown point.
  CandelabraSystem(std::vector<std::vector<Point>> groups, std::vector<Point> stem,
                   std::vector<Block> blocks);

  std::uint32_t v() const noexcept { return v_; }
  const std::vector<std::vector<Point>>& groups() const noexcept { return groups_; }
  const std::vector<Point>& stem() const noexcept { return stem_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  /// The group type read off the actual group and stem sizes.
  GroupType declared_type() const;
  /// Index of the group holding p, or -1 for stem points.
  int group_of(Point p) const;

  friend bool operator==(const CandelabraSystem&, const CandelabraSystem&) = default;

 private:
  std::uint32_t v_ = 0;
  std::vector<std::vector<Point>> groups_;
  std::vector<Point> stem_;
  std::vector<Block> blocks_;
  std::vector<int> group_of_;
};

/// Dense occupancy map over all C(n,3) triples, indexed by colex rank.
class TripleIndex {
 public:
  static constexpr std::int32_t kUncovered = -1;

  explicit TripleIndex(std::uint32_t n);

  std::uint32_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return owner_.size(); }
  std::int32_t owner(std::uint64_t rank) const noexcept { return owner_[rank]; }
  /// Records `block_id` as covering `rank`; returns the previous owner.
  std::int32_t claim(std::uint64_t rank, std::int32_t block_id) noexcept;
  void release(std::uint64_t rank) noexcept { owner_[rank] = kUncovered; }

 private:
  std::uint32_t n_;
  std::vector<std::int32_t> owner_;
};

}  // namespace qpack
