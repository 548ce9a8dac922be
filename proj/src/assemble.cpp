#include "qpack/assemble.hpp"

#include <algorithm>
#include <sstream>

#include "qpack/verify.hpp"

namespace qpack {

namespace {

struct Prepared {
  GroupType type;
  Point x = 0;
  std::vector<Point> s_prime;
  std::vector<Block> kept;          // CQS labels
  std::uint64_t through_x = 0;
  std::vector<Block> special;       // CQS labels
  std::vector<Block> groups;        // CQS labels
  std::vector<std::string> suboptimal;
};

std::string group_name(std::size_t i) { return "group " + std::to_string(i); }

Block map_block(const Block& b, const std::vector<Point>& map) {
  return Block(map[b[0]], map[b[1]], map[b[2]], map[b[3]]);
}

/// Validates one fill and returns its blocks in CQS labels.
std::vector<Block> place_fill(const CandelabraSystem& cqs, std::size_t g, const FillBinding& fill,
                              Point x, const std::vector<Point>& s_prime, bool holey,
                              const std::string& what) {
  const auto& group = cqs.groups()[g];
  const auto& d = fill.design;
  const std::size_t expected_n = group.size() + s_prime.size();
  if (d.n() != expected_n) {
    throw Error(ErrorKind::AlignmentError, what + ": fill has " + std::to_string(d.n()) +
                                               " points, expected " + std::to_string(expected_n));
  }
  std::vector<Point> map = fill.map.empty() ? canonical_fill_map(cqs, g, x) : fill.map;
  if (map.size() != d.n()) {
    throw Error(ErrorKind::AlignmentError, what + ": map has " + std::to_string(map.size()) +
                                               " entries for " + std::to_string(d.n()) + " points");
  }
  std::vector<Point> target(group.begin(), group.end());
  target.insert(target.end(), s_prime.begin(), s_prime.end());
  std::sort(target.begin(), target.end());
  std::vector<Point> image = map;
  std::sort(image.begin(), image.end());
  if (image != target) {
    throw Error(ErrorKind::AlignmentError, what + ": map is not a bijection onto the group plus S'");
  }

  auto report = check_packing(d);
  if (!report.ok) throw Error(ErrorKind::NotAPacking, what + ": " + report.summary_line());

  if (holey && d.hole()) {
    std::vector<Point> mapped_hole;
    for (Point p : *d.hole()) mapped_hole.push_back(map[p]);
    std::sort(mapped_hole.begin(), mapped_hole.end());
    if (mapped_hole != s_prime) {
      throw Error(ErrorKind::AlignmentError, what + ": the fill's hole does not map onto S'");
    }
  }

  std::vector<Block> out;
  out.reserve(d.blocks().size());
  for (const auto& b : d.blocks()) {
    Block m = map_block(b, map);
    if (holey && m.meet(s_prime) >= 3) {
      throw Error(ErrorKind::HoleViolation,
                  what + ": block " + m.to_string() + " covers a triple inside S'");
    }
    out.push_back(m);
  }
  return out;
}

Prepared prepare(const AssemblyInput& in) {
  const auto& cqs = in.cqs;
  auto cqs_report = check_cqs(cqs);
  if (!cqs_report.ok) throw Error(ErrorKind::NotAPacking, "CQS: " + cqs_report.summary_line());
  if (in.special_group >= cqs.groups().size()) {
    throw Error(ErrorKind::AlignmentError, "special group index out of range");
  }
  if (cqs.stem().empty()) throw Error(ErrorKind::AlignmentError, "empty stem: no point to remove");

  Prepared p;
  const auto& stem = cqs.stem();
  p.x = in.stem_point.value_or(*std::max_element(stem.begin(), stem.end()));
  if (std::find(stem.begin(), stem.end(), p.x) == stem.end()) {
    throw Error(ErrorKind::AlignmentError, "stem point " + std::to_string(p.x) + " is not in the stem");
  }
  for (Point q : stem) {
    if (q != p.x) p.s_prime.push_back(q);
  }
  std::sort(p.s_prime.begin(), p.s_prime.end());

  auto declared = cqs.declared_type();
  const std::uint64_t g0 = cqs.groups()[in.special_group].size();
  p.type = GroupType(declared.entries(), declared.stem(), g0);
  const std::uint64_t s = stem.size();

  for (const auto& [g, fill] : in.group_fills) {
    if (g >= cqs.groups().size() || g == in.special_group) {
      throw Error(ErrorKind::AlignmentError, "fill given for " + group_name(g) +
                                                 ", which is not a non-special group");
    }
  }
  for (std::size_t g = 0; g < cqs.groups().size(); ++g) {
    if (g != in.special_group && !in.group_fills.count(g)) {
      throw Error(ErrorKind::AlignmentError, "no fill for " + group_name(g));
    }
  }

  for (const auto& b : cqs.blocks()) {
    if (b.contains(p.x)) {
      ++p.through_x;
    } else {
      p.kept.push_back(b);
    }
  }

  p.special = place_fill(cqs, in.special_group, in.special_fill, p.x, p.s_prime, false,
                         "special fill on " + group_name(in.special_group));
  const BigInt special_target = johnson_bound(g0 + s - 1);
  if (BigInt(p.special.size()) < special_target) {
    p.suboptimal.push_back("special fill on " + group_name(in.special_group) + ": " +
                           std::to_string(p.special.size()) + " blocks, target " +
                           special_target.str());
  }
  for (const auto& [g, fill] : in.group_fills) {
    auto placed = place_fill(cqs, g, fill, p.x, p.s_prime, true, "fill on " + group_name(g));
    const BigInt target = hpqs_target(cqs.groups()[g].size(), s);
    if (BigInt(placed.size()) < target) {
      p.suboptimal.push_back("fill on " + group_name(g) + ": " + std::to_string(placed.size()) +
                             " blocks, target " + target.str());
    }
    p.groups.insert(p.groups.end(), placed.begin(), placed.end());
  }
  return p;
}

std::optional<BigInt> divide_exact(const BigInt& num, int den) {
  if (num % den != 0) return std::nullopt;
  return BigInt(num / den);
}

CountingRecord audit(const Prepared& p) {
  const auto& t = p.type;
  const BigInt u = BigInt(t.group_points());
  const BigInt s = BigInt(t.stem());
  const BigInt g0 = BigInt(*t.special());

  CountingRecord r;
  r.congruences = classify(t);
  r.fills_meet_targets = p.suboptimal.empty();
  const bool enforce = r.congruences != Congruences::None && r.fills_meet_targets;

  r.cqs_blocks.measured = p.kept.size() + p.through_x;
  r.cqs_blocks.formula = cqs_block_count(t);
  r.cqs_blocks.asserted = true;

  r.stem_blocks.measured = p.through_x;
  r.stem_blocks.formula = cqs_stem_point_block_count(t);
  r.stem_blocks.asserted = true;

  BigInt cubes = u * u * u - g0 * g0 * g0;
  BigInt squares = u * u - g0 * g0;
  for (const auto& e : t.others()) {
    const BigInt g = BigInt(e.size);
    cubes -= BigInt(e.multiplicity) * g * g * g;
    squares -= BigInt(e.multiplicity) * g * g;
  }
  r.kept_blocks.measured = p.kept.size();
  r.kept_blocks.formula = divide_exact(cubes + (3 * s - 7) * squares, 24);
  r.kept_blocks.asserted = r.kept_blocks.formula.has_value();

  auto fill_poly = [&](const BigInt& g) { return g * g * g + g * g * (3 * s - 7) + g * (3 * s * s - 14 * s + 12); };
  const BigInt stem_poly = s * s * s - 7 * s * s + 12 * s - 24;

  r.special_fill.measured = p.special.size();
  r.special_fill.formula = divide_exact(fill_poly(g0) + stem_poly, 24);
  r.special_fill.asserted = enforce && r.special_fill.formula.has_value();

  BigInt others_num = 0;
  for (const auto& e : t.others()) others_num += BigInt(e.multiplicity) * fill_poly(BigInt(e.size));
  r.group_fills.measured = p.groups.size();
  r.group_fills.formula = divide_exact(others_num, 24);
  r.group_fills.asserted = enforce && r.group_fills.formula.has_value();

  r.total.measured = p.kept.size() + p.special.size() + p.groups.size();
  try {
    r.total.formula = assembly_predicted_count(t);
  } catch (const Error&) {
    r.total.formula.reset();
  }
  r.total.asserted = enforce && r.total.formula.has_value();
  r.ingredient_sum = ingredient_sum_count(t);

  auto require = [](const CountLine& line, const char* name) {
    if (line.asserted && line.formula && line.measured != *line.formula) {
      throw Error(ErrorKind::CountingViolation, std::string(name) + ": measured " +
                                                    line.measured.str() + ", formula " +
                                                    line.formula->str());
    }
  };
  require(r.cqs_blocks, "|B|");
  require(r.stem_blocks, "|B_x|");
  require(r.kept_blocks, "|B'|");
  require(r.special_fill, "|C_G|");
  require(r.group_fills, "sum |C_G'|");
  require(r.total, "|A|");
  if (r.fills_meet_targets && r.total.measured != r.ingredient_sum) {
    throw Error(ErrorKind::CountingViolation, "|A|: measured " + r.total.measured.str() +
                                                  ", ingredient sum " + r.ingredient_sum.str());
  }
  if (enforce) {
    const BigInt j = johnson_bound(t.points() - 1);
    if (r.total.measured != j) {
      throw Error(ErrorKind::CountingViolation,
                  "|A|: measured " + r.total.measured.str() + ", Johnson bound " + j.str());
    }
  }
  return r;
}

}  // namespace

std::string_view to_string(Congruences c) {
  switch (c) {
    case Congruences::None: return "none";
    case Congruences::Stem6: return "stem-6";
    case Congruences::Stem0: return "stem-0";
  }
  return "?";
}

Congruences classify(const GroupType& t) {
  if (satisfies_stem0_congruences(t)) return Congruences::Stem0;
  if (satisfies_stem6_congruences(t)) return Congruences::Stem6;
  return Congruences::None;
}

std::string CountingRecord::to_text() const {
  std::ostringstream os;
  auto line = [&](const char* name, const CountLine& l) {
    os << name << " measured=" << l.measured << " formula="
       << (l.formula ? l.formula->str() : std::string("n/a"))
       << (l.asserted ? " enforced" : "") << '\n';
  };
  line("|B|", cqs_blocks);
  line("|B_x|", stem_blocks);
  line("|B'|", kept_blocks);
  line("|C_G|", special_fill);
  line("sum|C_G'|", group_fills);
  line("|A|", total);
  os << "ingredient_sum=" << ingredient_sum << " congruences=" << to_string(congruences)
     << " fills_meet_targets=" << (fills_meet_targets ? "true" : "false") << '\n';
  return os.str();
}

std::vector<Point> canonical_fill_map(const CandelabraSystem& cqs, std::size_t group, Point stem_point) {
  std::vector<Point> map(cqs.groups().at(group).begin(), cqs.groups().at(group).end());
  std::sort(map.begin(), map.end());
  std::vector<Point> rest;
  for (Point q : cqs.stem()) {
    if (q != stem_point) rest.push_back(q);
  }
  std::sort(rest.begin(), rest.end());
  map.insert(map.end(), rest.begin(), rest.end());
  return map;
}

CountingRecord counting_audit(const AssemblyInput& input) { return audit(prepare(input)); }

AssemblyResult assemble(const AssemblyInput& input) {
  Prepared p = prepare(input);
  AssemblyResult result;
  result.counts = audit(p);
  result.stem_point = p.x;
  result.type = p.type;
  result.suboptimal = p.suboptimal;

  const Point x = p.x;
  auto drop = [x](Point q) { return q < x ? q : q - 1; };
  std::vector<Block> blocks;
  blocks.reserve(p.kept.size() + p.special.size() + p.groups.size());
  for (const auto* part : {&p.kept, &p.special, &p.groups}) {
    for (const auto& b : *part) blocks.emplace_back(drop(b[0]), drop(b[1]), drop(b[2]), drop(b[3]));
  }
  const auto n = static_cast<std::uint32_t>(input.cqs.v() - 1);
  PackingDesign out(n, std::move(blocks));
  auto report = check_packing(out);
  if (!report.ok) throw Error(ErrorKind::NotAPacking, "assembled design: " + report.summary_line());

  const bool claimed = result.counts.congruences != Congruences::None &&
                       result.counts.fills_meet_targets && BigInt(out.blocks().size()) == johnson_bound(n);
  out = out.canonical();
  if (claimed) out.set_kind(DesignKind::MPQSClaimed);
  result.design = std::move(out);
  return result;
}

}  // namespace qpack
