#include "qpack/core.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

namespace qpack {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPoint: return "InvalidPoint";
    case ErrorKind::InvalidBlock: return "InvalidBlock";
    case ErrorKind::DuplicateBlock: return "DuplicateBlock";
    case ErrorKind::InvalidCongruence: return "InvalidCongruence";
    case ErrorKind::InfeasibleType: return "InfeasibleType";
    case ErrorKind::NotOneFactorable: return "NotOneFactorable";
    case ErrorKind::InvalidModulus: return "InvalidModulus";
    case ErrorKind::MissingEntry: return "MissingEntry";
    case ErrorKind::MissingIngredient: return "MissingIngredient";
    case ErrorKind::InvalidIngredient: return "InvalidIngredient";
    case ErrorKind::ConstructionConflict: return "ConstructionConflict";
    case ErrorKind::NotAPacking: return "NotAPacking";
    case ErrorKind::MissingContext: return "MissingContext";
    case ErrorKind::InvalidTarget: return "InvalidTarget";
    case ErrorKind::AlignmentError: return "AlignmentError";
    case ErrorKind::HoleViolation: return "HoleViolation";
    case ErrorKind::CountingViolation: return "CountingViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

namespace {

std::string join_signatures(const std::vector<std::string>& sigs) {
  std::string out;
  for (const auto& s : sigs) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

}  // namespace

MissingIngredient::MissingIngredient(std::vector<std::string> signatures)
    : Error(ErrorKind::MissingIngredient, join_signatures(signatures)),
      signatures_(std::move(signatures)) {}

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error(ErrorKind::ParseError,
            line == 0 ? message : "line " + std::to_string(line) + ": " + message),
      line_(line) {}

Triple::Triple(Point a, Point b, Point c) : p_{a, b, c} {
  std::sort(p_.begin(), p_.end());
  if (p_[0] == p_[1] || p_[1] == p_[2]) {
    throw Error(ErrorKind::InvalidPoint, "triple points must be distinct");
  }
}

Block::Block(Point a, Point b, Point c, Point d) : Block(std::array<Point, 4>{a, b, c, d}) {}

Block::Block(std::array<Point, 4> points) : p_(points) {
  std::sort(p_.begin(), p_.end());
  if (std::adjacent_find(p_.begin(), p_.end()) != p_.end()) {
    throw Error(ErrorKind::InvalidBlock, "block points must be distinct");
  }
}

bool Block::contains(Point x) const noexcept {
  return std::find(p_.begin(), p_.end(), x) != p_.end();
}

std::size_t Block::meet(std::span<const Point> sorted_set) const noexcept {
  std::size_t k = 0;
  for (Point p : p_) {
    if (std::binary_search(sorted_set.begin(), sorted_set.end(), p)) ++k;
  }
  return k;
}

std::string Block::to_string() const {
  return std::to_string(p_[0]) + ' ' + std::to_string(p_[1]) + ' ' + std::to_string(p_[2]) + ' ' +
         std::to_string(p_[3]);
}

std::array<Triple, 4> block_triples(const Block& b) {
  const auto& p = b.points();
  return {Triple(p[0], p[1], p[2]), Triple(p[0], p[1], p[3]), Triple(p[0], p[2], p[3]),
          Triple(p[1], p[2], p[3])};
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::uint64_t rank_triple(const Triple& t, std::uint32_t n) {
  if (t[2] >= n) {
    throw Error(ErrorKind::InvalidPoint,
                "point " + std::to_string(t[2]) + " out of range for n=" + std::to_string(n));
  }
  return rank_triple_unchecked(t[0], t[1], t[2]);
}

Triple unrank_triple(std::uint64_t rank, std::uint32_t n) {
  if (rank >= triple_count(n)) {
    throw Error(ErrorKind::InvalidPoint, "triple rank " + std::to_string(rank) + " out of range");
  }
  // Largest c with C(c,3) <= rank, then b, then a.
  Point c = 2;
  while (binomial(c + 1, 3) <= rank) ++c;
  rank -= binomial(c, 3);
  Point b = 1;
  while (binomial(b + 1, 2) <= rank) ++b;
  rank -= binomial(b, 2);
  return Triple(static_cast<Point>(rank), b, c);
}

Point mixed_point_label(const MixedPoints& spec, MixedName name) {
  if (name.kind == MixedName::Kind::Residue) {
    if (name.index >= spec.modulus) {
      throw Error(ErrorKind::InvalidPoint, "residue " + std::to_string(name.index) +
                                               " out of range for Z_" +
                                               std::to_string(spec.modulus));
    }
    return name.index;
  }
  if (name.index < 1 || name.index > spec.infinite) {
    throw Error(ErrorKind::InvalidPoint, "x_" + std::to_string(name.index) + " out of range (t=" +
                                             std::to_string(spec.infinite) + ")");
  }
  return spec.modulus + name.index - 1;
}

MixedName parse_mixed_name(std::string_view token) {
  bool infinite = false;
  if (!token.empty() && token.front() == 'x') {
    infinite = true;
    token.remove_prefix(1);
    if (!token.empty() && token.front() == '_') token.remove_prefix(1);
  }
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
    throw Error(ErrorKind::InvalidPoint, "bad point name '" + std::string(token) + "'");
  }
  return infinite ? MixedName::infinite(value) : MixedName::residue(value);
}

std::string mixed_point_name(const MixedPoints& spec, Point p) {
  if (p < spec.modulus) return std::to_string(p);
  return "x" + std::to_string(p - spec.modulus + 1);
}

std::string_view to_string(DesignKind kind) {
  switch (kind) {
    case DesignKind::PQS: return "PQS";
    case DesignKind::MPQSClaimed: return "MPQS";
    case DesignKind::HPQSClaimed: return "HPQS";
  }
  return "PQS";
}

PackingDesign::PackingDesign(std::uint32_t n, std::vector<Block> blocks,
                             std::optional<std::vector<Point>> hole, DesignKind kind)
    : n_(n), blocks_(std::move(blocks)), hole_(std::move(hole)), kind_(kind) {
  for (const auto& b : blocks_) {
    if (b[3] >= n_) {
      throw Error(ErrorKind::InvalidPoint,
                  "block {" + b.to_string() + "} uses a point >= n=" + std::to_string(n_));
    }
  }
  if (hole_) {
    std::sort(hole_->begin(), hole_->end());
    if (std::adjacent_find(hole_->begin(), hole_->end()) != hole_->end()) {
      throw Error(ErrorKind::InvalidPoint, "hole points must be distinct");
    }
    if (!hole_->empty() && hole_->back() >= n_) {
      throw Error(ErrorKind::InvalidPoint, "hole point out of range");
    }
  }
  std::vector<Block> sorted = blocks_;
  std::sort(sorted.begin(), sorted.end());
  if (auto it = std::adjacent_find(sorted.begin(), sorted.end()); it != sorted.end()) {
    throw Error(ErrorKind::DuplicateBlock, "block {" + it->to_string() + "} appears twice");
  }
}

PackingDesign PackingDesign::canonical() const {
  PackingDesign copy = *this;
  std::sort(copy.blocks_.begin(), copy.blocks_.end());
  return copy;
}

CandelabraSystem::CandelabraSystem(std::vector<std::vector<Point>> groups, std::vector<Point> stem,
                                   std::vector<Block> blocks)
    : groups_(std::move(groups)), stem_(std::move(stem)), blocks_(std::move(blocks)) {
  std::size_t v = stem_.size();
  for (auto& g : groups_) {
    if (g.empty()) throw Error(ErrorKind::InvalidPoint, "groups must be non-empty");
    std::sort(g.begin(), g.end());
    v += g.size();
  }
  std::sort(stem_.begin(), stem_.end());
  v_ = static_cast<std::uint32_t>(v);
  group_of_.assign(v_, -2);
  auto place = [&](Point p, int id) {
    if (p >= v_ || group_of_[p] != -2) {
      throw Error(ErrorKind::InvalidPoint,
                  "groups and stem must partition 0.." + std::to_string(v_ - 1));
    }
    group_of_[p] = id;
  };
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    for (Point p : groups_[i]) place(p, static_cast<int>(i));
  }
  for (Point p : stem_) place(p, -1);
  for (const auto& b : blocks_) {
    if (b[3] >= v_) throw Error(ErrorKind::InvalidPoint, "block uses a point outside the system");
  }
}

GroupType CandelabraSystem::declared_type() const {
  std::map<std::uint64_t, std::uint64_t, std::greater<>> counts;
  for (const auto& g : groups_) ++counts[g.size()];
  std::vector<GroupCount> entries;
  for (auto [size, mult] : counts) entries.push_back({size, mult});
  return GroupType(std::move(entries), stem_.size());
}

int CandelabraSystem::group_of(Point p) const { return group_of_.at(p); }

TripleIndex::TripleIndex(std::uint32_t n) : n_(n), owner_(triple_count(n), kUncovered) {}

std::int32_t TripleIndex::claim(std::uint64_t rank, std::int32_t block_id) noexcept {
  std::int32_t prev = owner_[rank];
  if (prev == kUncovered) owner_[rank] = block_id;
  return prev;
}

}  // namespace qpack
