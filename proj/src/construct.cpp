#include "qpack/construct.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "qpack/bounds.hpp"
#include "qpack/ingredients.hpp"

namespace qpack {

std::vector<Block> develop_cyclic(const Block& base, const MixedPoints& points) {
  const std::uint32_t m = points.modulus;
  std::vector<Block> out;
  std::set<Block> seen;
  for (std::uint32_t j = 0; j < std::max<std::uint32_t>(m, 1); ++j) {
    std::array<Point, 4> p{};
    for (std::size_t k = 0; k < 4; ++k) {
      Point q = base[k];
      p[k] = points.is_infinite(q) ? q : (q + j) % m;
    }
    Block b(p);
    if (seen.insert(b).second) out.push_back(b);
  }
  return out;
}

std::vector<Block> develop_permutation(const Block& base, const PermutationSpec& p) {
  std::vector<Block> out{base};
  for (Block b = p(base); b != base; b = p(b)) out.push_back(b);
  return out;
}

std::vector<Block> develop(const Block& base, const GroupAction& action) {
  if (const auto* c = std::get_if<CyclicAction>(&action)) return develop_cyclic(base, c->points);
  return develop_permutation(base, std::get<PermutationSpec>(action));
}

std::vector<Block> cross_factor_blocks(const FactorArray& array, std::span<const IndexPair> pairs,
                                       FactorCache& factors) {
  const MixedPoints pts{array.modulus(), static_cast<std::uint32_t>(array.side())};
  std::vector<Block> out;
  for (auto [i, j] : pairs) {
    const auto& label = array.at(i, j);
    if (!label) {
      throw Error(ErrorKind::MissingEntry,
                  "A(" + std::to_string(i) + "," + std::to_string(j) + ") is empty but required");
    }
    const Point xi = mixed_point_label(pts, MixedName::infinite(static_cast<std::uint32_t>(i)));
    const Point xj = mixed_point_label(pts, MixedName::infinite(static_cast<std::uint32_t>(j)));
    for (const auto& pr : factors.get(*label).pairs) out.emplace_back(xi, xj, pr.lo, pr.hi);
  }
  return out;
}

ConstructionConflictError::ConstructionConflictError(std::vector<Conflict> conflicts,
                                                     std::vector<Block> blocks,
                                                     const MixedPoints& points)
    : Error(ErrorKind::ConstructionConflict,
            [&] {
              auto name = [&](const Block& b) {
                std::string s = "{";
                for (std::size_t k = 0; k < 4; ++k) {
                  s += (k ? " " : "") + mixed_point_name(points, b[k]);
                }
                return s + "}";
              };
              std::ostringstream os;
              os << conflicts.size() << " triple(s) covered twice";
              std::size_t shown = 0;
              for (const auto& c : conflicts) {
                if (++shown > 12) {
                  os << "; ...";
                  break;
                }
                os << "; {" << mixed_point_name(points, c.triple[0]) << ' '
                   << mixed_point_name(points, c.triple[1]) << ' '
                   << mixed_point_name(points, c.triple[2]) << "} in " << name(blocks[c.first_block])
                   << " and " << name(blocks[c.second_block]);
              }
              return os.str();
            }()),
      conflicts_(std::move(conflicts)),
      blocks_(std::move(blocks)) {}

namespace {

struct Part {
  std::string name;
  std::vector<Block> blocks;
};

struct Assembly {
  std::vector<Part> parts;
  std::vector<ArrayRepair> repairs;
  std::map<std::size_t, std::size_t> orbit_census;
  std::optional<FactorArray> array;
  std::map<std::string, std::vector<Triple>> subdesign_leaves;
  std::vector<std::string> log;

  std::vector<Block> all_blocks() const {
    std::vector<Block> out;
    for (const auto& p : parts) out.insert(out.end(), p.blocks.begin(), p.blocks.end());
    return out;
  }
};

Point x_label(const MixedPoints& pts, std::size_t i) {
  return mixed_point_label(pts, MixedName::infinite(static_cast<std::uint32_t>(i)));
}

Triple map_triple(const Triple& t, const std::vector<Point>& map) {
  return Triple(map[t[0]], map[t[1]], map[t[2]]);
}

Block map_block(const Block& b, const std::vector<Point>& map) {
  return Block(map[b[0]], map[b[1]], map[b[2]], map[b[3]]);
}

std::string x_range(std::size_t lo, std::size_t hi) {
  return "x" + std::to_string(lo) + "-x" + std::to_string(hi);
}

void require_valid(const PackingDesign& d, const std::string& signature) {
  auto problems = check_against_signature(d, signature);
  if (!problems.empty()) {
    std::string msg = signature + " ingredient rejected:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw Error(ErrorKind::InvalidIngredient, msg);
  }
}

/// Every part of the construction except (optionally) the class fills.
Assembly assemble_table(const ConstructionTable& table, const std::optional<PackingDesign>& sub,
                        const std::optional<PackingDesign>& fill) {
  const MixedPoints pts = table.points();
  Assembly a;

  if (table.subdesign && sub) {
    const auto& place = *table.subdesign;
    const std::size_t width = place.last - place.first + 1;
    if (sub->n() != width) {
      throw Error(ErrorKind::InvalidIngredient, place.signature + " has " + std::to_string(sub->n()) +
                                                    " points, placement needs " + std::to_string(width));
    }
    std::vector<Point> map(width);
    for (std::size_t k = 0; k < width; ++k) map[k] = x_label(pts, place.first + k);
    Part part{"subdesign " + place.signature + " on " + x_range(place.first, place.last), {}};
    for (const auto& b : sub->blocks()) part.blocks.push_back(map_block(b, map));
    auto& leave = a.subdesign_leaves[place.signature];
    for (const auto& t : compute_leave(*sub)) leave.push_back(map_triple(t, map));
    a.log.push_back(part.name + ": " + std::to_string(part.blocks.size()) + " blocks");
    a.parts.push_back(std::move(part));
  }

  if (table.class_fill && fill) {
    const auto& cf = *table.class_fill;
    const std::size_t hole_size = cf.hole_last - cf.hole_first + 1;
    const std::vector<Point>& hole = *fill->hole();
    std::vector<Point> others;
    for (Point p = 0; p < fill->n(); ++p) {
      if (!std::binary_search(hole.begin(), hole.end(), p)) others.push_back(p);
    }
    if (hole.size() != hole_size || others.size() * cf.classes != pts.modulus) {
      throw Error(ErrorKind::InvalidIngredient, cf.signature + " does not fit the residue classes");
    }
    auto fill_leave = compute_leave(*fill);
    Part part{std::to_string(cf.classes) + " x " + cf.signature + " on residue classes mod " +
                  std::to_string(cf.classes) + " plus hole " + x_range(cf.hole_first, cf.hole_last),
              {}};
    auto& leave = a.subdesign_leaves[cf.signature];
    for (std::uint32_t j = 0; j < cf.classes; ++j) {
      std::vector<Point> map(fill->n());
      for (std::size_t k = 0; k < others.size(); ++k) {
        map[others[k]] = static_cast<Point>(cf.classes * k + j);
      }
      for (std::size_t k = 0; k < hole.size(); ++k) map[hole[k]] = x_label(pts, cf.hole_first + k);
      for (const auto& b : fill->blocks()) part.blocks.push_back(map_block(b, map));
      for (const auto& t : fill_leave) {
        bool in_hole = std::binary_search(hole.begin(), hole.end(), t[0]) &&
                       std::binary_search(hole.begin(), hole.end(), t[1]) &&
                       std::binary_search(hole.begin(), hole.end(), t[2]);
        if (!in_hole) leave.push_back(map_triple(t, map));
      }
    }
    a.log.push_back(part.name + ": " + std::to_string(part.blocks.size()) + " blocks");
    a.parts.push_back(std::move(part));
  }

  if (table.array) {
    FactorArray arr = *table.array;
    a.repairs = repair_upper_triangle(arr);
    auto pairs = table.cross_pairs();
    for (auto& r : repair_diagonal_complements(arr, pairs)) a.repairs.push_back(std::move(r));
    for (const auto& r : a.repairs) a.log.push_back("repair " + r.describe());
    FactorCache factors(pts.modulus);
    Part part{"cross blocks {x_i, x_j, a, b} over " + std::to_string(pairs.size()) + " index pairs",
              cross_factor_blocks(arr, pairs, factors)};
    a.log.push_back(part.name + ": " + std::to_string(part.blocks.size()) + " blocks");
    a.parts.push_back(std::move(part));
    a.array = std::move(arr);
  }

  const std::size_t full_orbit = std::holds_alternative<CyclicAction>(table.action)
                                     ? pts.modulus
                                     : std::get<PermutationSpec>(table.action).order();
  Part developed{"developed base blocks (" + std::to_string(table.rows.size()) + " rows)", {}};
  for (const auto& row : table.rows) {
    auto orbit = develop(row.block, table.action);
    const std::size_t expected = row.expected_orbit.value_or(full_orbit);
    if (orbit.size() != expected) {
      throw Error(ErrorKind::ConstructionConflict,
                  "base block {" + row.block.to_string() + "} has orbit size " +
                      std::to_string(orbit.size()) + ", table expects " + std::to_string(expected));
    }
    ++a.orbit_census[orbit.size()];
    developed.blocks.insert(developed.blocks.end(), orbit.begin(), orbit.end());
  }
  a.log.push_back(developed.name + ": " + std::to_string(developed.blocks.size()) + " blocks");
  a.parts.push_back(std::move(developed));
  return a;
}

}  // namespace

BuildResult build_mpqs(std::uint32_t n, const IngredientSource& ingredients) {
  const ConstructionTable& table = construction_table(n);
  const MixedPoints pts = table.points();

  std::vector<std::string> missing;
  std::optional<PackingDesign> sub;
  std::optional<PackingDesign> fill;
  if (table.subdesign) {
    sub = ingredients.find_packing(table.subdesign->signature);
    if (!sub) missing.push_back(table.subdesign->signature);
  }
  if (table.class_fill) {
    fill = ingredients.find_packing(table.class_fill->signature);
    if (!fill) missing.push_back(table.class_fill->signature);
  }
  if (!missing.empty()) throw MissingIngredient(missing);
  if (sub) require_valid(*sub, table.subdesign->signature);
  if (fill) require_valid(*fill, table.class_fill->signature);

  Assembly a = assemble_table(table, sub, fill);
  std::vector<Block> blocks = a.all_blocks();
  auto conflicts = kernels::find_conflicts_parallel(n, blocks);
  if (!conflicts.empty()) throw ConstructionConflictError(std::move(conflicts), std::move(blocks), pts);

  const BigInt bound = johnson_bound(n);
  if (BigInt(blocks.size()) != bound) {
    std::ostringstream os;
    os << "order " << n << " construction produced " << blocks.size() << " blocks, expected " << bound;
    throw Error(ErrorKind::CountingViolation, os.str());
  }

  BuildResult res;
  if (table.subdesign) res.subdesign_blocks = a.parts.front().blocks;
  for (const auto& p : a.parts) res.parts.push_back({p.name, p.blocks.size()});
  res.design = PackingDesign(n, std::move(blocks), std::nullopt, DesignKind::MPQSClaimed).canonical();
  res.repairs = std::move(a.repairs);
  res.orbit_census = std::move(a.orbit_census);
  res.leave_context.points = pts;
  res.leave_context.array = std::move(a.array);
  res.leave_context.subdesign_leaves = std::move(a.subdesign_leaves);
  if (const auto* perm = std::get_if<PermutationSpec>(&table.action)) res.leave_context.permutation = *perm;
  res.log = std::move(a.log);

  // A repaired table is only trusted if the leave also comes out exactly as described.
  if (!res.repairs.empty()) {
    auto leave = compute_leave(res.design);
    if (!match_leave(leave, table.leave, res.leave_context)) {
      throw Error(ErrorKind::ConstructionConflict,
                  "array repairs give a packing whose leave does not match the table's description");
    }
    res.log.push_back("repaired array confirmed by zero conflicts and exact leave match");
  }
  return res;
}

FallbackReport check_without_class_fill(std::uint32_t n, const IngredientSource& ingredients) {
  const ConstructionTable& table = construction_table(n);
  const MixedPoints pts = table.points();
  FallbackReport report;

  std::optional<PackingDesign> sub;
  if (table.subdesign) {
    sub = ingredients.find_packing(table.subdesign->signature);
    if (!sub) throw MissingIngredient({table.subdesign->signature});
    require_valid(*sub, table.subdesign->signature);
  }
  Assembly a = assemble_table(table, sub, std::nullopt);
  auto blocks = a.all_blocks();
  report.blocks_without_fills = blocks.size();
  auto conflicts = kernels::find_conflicts_parallel(n, blocks);
  report.disjoint = conflicts.empty();
  if (!report.disjoint) {
    report.problems.push_back(std::to_string(conflicts.size()) + " triples covered twice");
  }

  report.classes_free = true;
  if (table.class_fill) {
    const auto& cf = *table.class_fill;
    const Point hole_lo = x_label(pts, cf.hole_first);
    const Point hole_hi = x_label(pts, cf.hole_last);
    auto in_hole = [&](Point p) { return p >= hole_lo && p <= hole_hi; };
    // class of a residue, or -1 for hole points, -2 for any other point
    auto cls = [&](Point p) -> int {
      if (in_hole(p)) return -1;
      if (pts.is_infinite(p)) return -2;
      return static_cast<int>(p % cf.classes);
    };
    for (const auto& b : blocks) {
      for (const auto& t : block_triples(b)) {
        int c0 = cls(t[0]), c1 = cls(t[1]), c2 = cls(t[2]);
        if (c0 == -2 || c1 == -2 || c2 == -2) continue;
        int cls_seen = -1;
        bool same = true;
        for (int c : {c0, c1, c2}) {
          if (c < 0) continue;
          if (cls_seen >= 0 && c != cls_seen) same = false;
          cls_seen = c;
        }
        if (same && cls_seen >= 0) {
          report.classes_free = false;
          report.problems.push_back("block {" + b.to_string() + "} covers a triple reserved for a class fill");
          break;
        }
      }
    }
    auto parsed = parse_signature(cf.signature);
    report.fill_blocks_needed =
        cf.classes * to_u64(hpqs_target(parsed.order - parsed.hole, parsed.hole + 1));
  }
  if (BigInt(report.blocks_without_fills + report.fill_blocks_needed) != johnson_bound(n)) {
    report.problems.push_back("part counts do not add up to the Johnson bound");
  }
  return report;
}

}  // namespace qpack
