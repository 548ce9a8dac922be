#include <doctest.h>

#include "oracles.hpp"
#include "qpack/assemble.hpp"
#include "qpack/ingredients.hpp"
#include "qpack/verify.hpp"

using namespace qpack;

namespace {

const BuiltinIngredients& lib() { return builtin_ingredients(); }

PackingDesign packing(const std::string& sig) {
  auto d = lib().find_packing(sig);
  REQUIRE_MESSAGE(d, sig);
  return *d;
}

CandelabraSystem cqs(const std::string& sig) {
  auto c = lib().find_cqs(sig);
  REQUIRE_MESSAGE(c, sig);
  return *c;
}

/// Special group 0, canonical maps, the same fill on every other group.
AssemblyInput uniform(const CandelabraSystem& c, const PackingDesign& special, const PackingDesign& other) {
  AssemblyInput in;
  in.cqs = c;
  in.special_fill = {special, {}};
  for (std::size_t g = 1; g < c.groups().size(); ++g) in.group_fills[g] = {other, {}};
  return in;
}

/// A CQS with a single group and no blocks: every triple is internal.
CandelabraSystem single_group(std::uint32_t g, std::uint32_t s) {
  std::vector<Point> group, stem;
  for (Point p = 0; p < g; ++p) group.push_back(p);
  for (Point p = g; p < g + s; ++p) stem.push_back(p);
  return CandelabraSystem({group}, stem, {});
}

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("CQS(2^3:2) with empty fills gives a PQS(7) with J(7) blocks") {
  auto c = cqs("CQS:2.2.2:2");
  auto in = uniform(c, packing("MPQS:3"), packing("HPQS:3:1"));
  auto r = assemble(in);
  CHECK(r.stem_point == 7);
  CHECK(r.design.n() == 7);
  CHECK(r.design.blocks().size() == 7);
  CHECK(johnson_bound(7) == 7);
  CHECK(oracle::is_packing(r.design.blocks()));
  CHECK(r.suboptimal.empty());
  // outside both congruence families: valid, not claimed
  CHECK(r.design.kind() == DesignKind::PQS);

  // counts by direct enumeration
  std::size_t through_x = 0;
  for (const auto& b : c.blocks()) through_x += b.contains(7);
  CHECK(through_x == 4);
  CHECK(r.counts.cqs_blocks.measured == 11);
  CHECK(r.counts.stem_blocks.measured == 4);
  CHECK(r.counts.kept_blocks.measured == 7);
  CHECK(*r.counts.cqs_blocks.formula == 11);
  CHECK(*r.counts.stem_blocks.formula == (15 - 3) / 3);
  CHECK(*r.counts.kept_blocks.formula == 7);
  CHECK(r.counts.kept_blocks.asserted);
  CHECK(r.counts.total.measured == 7);
  CHECK(r.counts.ingredient_sum == 7);
  CHECK(r.counts.to_text().find("|B_x| measured=4 formula=4 enforced") != std::string::npos);

  auto audit = counting_audit(in);
  CHECK(audit.kept_blocks.measured == 7);
}

TEST_CASE("any stem point works") {
  auto c = cqs("CQS:2.2.2:2");
  auto in = uniform(c, packing("MPQS:3"), packing("HPQS:3:1"));
  in.stem_point = 6;
  auto r = assemble(in);
  CHECK(r.design.blocks().size() == 7);
  CHECK(check_packing(r.design).ok);
  in.stem_point = 3;
  CHECK(kind_of([&] { assemble(in); }) == ErrorKind::AlignmentError);
}

TEST_CASE("CQS(2^4:4): non-empty fills, 34 blocks") {
  auto c = cqs("CQS:2.2.2.2:4");
  auto in = uniform(c, packing("MPQS:5"), packing("HPQS:5:3"));
  auto r = assemble(in);
  CHECK(r.design.n() == 11);
  CHECK(r.counts.stem_blocks.measured == 8);
  CHECK(r.counts.special_fill.measured == 1);
  CHECK(r.counts.group_fills.measured == 3);
  CHECK(r.design.blocks().size() == 30 + 1 + 3);
  CHECK(r.counts.ingredient_sum == 34);
  CHECK(oracle::is_packing(r.design.blocks()));
  CHECK(r.suboptimal.empty());
  CHECK(r.design.kind() == DesignKind::PQS);
}

TEST_CASE("a fill short of its target is reported, the packing stays valid") {
  auto c = cqs("CQS:2.2.2.2:4");
  auto short_fill = PackingDesign(5, {}, std::vector<Point>{2, 3, 4});
  auto in = uniform(c, packing("MPQS:5"), packing("HPQS:5:3"));
  in.group_fills[2] = {short_fill, {}};
  auto r = assemble(in);
  CHECK(r.design.blocks().size() == 33);
  REQUIRE(r.suboptimal.size() == 1);
  CHECK(r.suboptimal[0].find("group 2") != std::string::npos);
  CHECK_FALSE(r.counts.fills_meet_targets);
  CHECK(check_packing(r.design).ok);
}

TEST_CASE("alignment errors") {
  auto c = cqs("CQS:2.2.2.2:4");
  auto base = uniform(c, packing("MPQS:5"), packing("HPQS:5:3"));

  auto in = base;
  in.group_fills.erase(3);
  CHECK(kind_of([&] { assemble(in); }) == ErrorKind::AlignmentError);

  in = base;
  in.group_fills[0] = in.group_fills[1];
  CHECK(kind_of([&] { assemble(in); }) == ErrorKind::AlignmentError);

  in = base;
  in.group_fills[1].map = {2, 3, 8, 9, 9};  // not a bijection
  CHECK(kind_of([&] { assemble(in); }) == ErrorKind::AlignmentError);

  in = base;
  in.group_fills[1].map = {2, 3, 8, 9, 0};  // lands outside the group plus S'
  CHECK(kind_of([&] { assemble(in); }) == ErrorKind::AlignmentError);

  in = base;
  in.group_fills[1].map = {8, 2, 3, 9, 10};  // hole {2,3,4} lands on {3,9,10}, not S'
  CHECK(kind_of([&] { assemble(in); }) == ErrorKind::AlignmentError);

  in = base;
  in.special_fill = {packing("MPQS:6"), {}};
  CHECK(kind_of([&] { assemble(in); }) == ErrorKind::AlignmentError);
}

TEST_CASE("hole violations and broken ingredients") {
  auto c = cqs("CQS:2.2.2.2:4");
  auto base = uniform(c, packing("MPQS:5"), packing("HPQS:5:3"));

  auto in = base;
  in.group_fills[1] = {PackingDesign(5, {Block(0, 2, 3, 4)}), {}};  // three points of S'
  CHECK(kind_of([&] { assemble(in); }) == ErrorKind::HoleViolation);

  in = base;
  in.special_fill = {PackingDesign(5, {Block(0, 1, 2, 3), Block(0, 1, 2, 4)}), {}};
  CHECK(kind_of([&] { assemble(in); }) == ErrorKind::NotAPacking);

  in = base;
  auto blocks = c.blocks();
  blocks.pop_back();
  in.cqs = CandelabraSystem(c.groups(), c.stem(), blocks);
  CHECK(kind_of([&] { assemble(in); }) == ErrorKind::NotAPacking);
}

TEST_CASE("single group: total is |B'| + |C_G|") {
  auto in = uniform(single_group(10, 2), packing("MPQS:11"), packing("MPQS:11"));
  auto r = assemble(in);
  CHECK(r.counts.kept_blocks.measured == 0);
  CHECK(r.counts.total.measured == r.counts.kept_blocks.measured + r.counts.special_fill.measured);
  CHECK(r.design.blocks().size() == 35);
}

TEST_CASE("congruence families: enforced identities and the optimal tag") {
  struct Case {
    std::uint32_t g, s;
    const char* fill;
    std::size_t expected;
    Congruences family;
  };
  for (const auto& k : {Case{12, 12, "MPQS:23", 419, Congruences::Stem0},
                        Case{18, 6, "MPQS:23", 419, Congruences::Stem6},
                        Case{24, 12, "MPQS:35", 1583, Congruences::Stem0}}) {
    CAPTURE(k.g);
    auto r = assemble(uniform(single_group(k.g, k.s), packing(k.fill), packing(k.fill)));
    CHECK(r.counts.congruences == k.family);
    CHECK(r.design.blocks().size() == k.expected);
    CHECK(r.design.kind() == DesignKind::MPQSClaimed);
    CHECK(r.counts.special_fill.asserted);
    CHECK(r.counts.total.asserted);
    CHECK(*r.counts.total.formula == k.expected);
    CHECK(*r.counts.special_fill.formula == k.expected);
  }
}

TEST_CASE("a short fill in a congruence family loses the tag but stays a packing") {
  auto m23 = packing("MPQS:23");
  std::vector<Block> fewer(m23.blocks().begin() + 1, m23.blocks().end());
  auto r = assemble(uniform(single_group(12, 12), PackingDesign(23, fewer), m23));
  CHECK(r.design.blocks().size() == 418);
  CHECK(r.design.kind() == DesignKind::PQS);
  CHECK(r.suboptimal.size() == 1);
  CHECK_FALSE(r.counts.total.asserted);
}

TEST_CASE("canonical map") {
  auto c = cqs("CQS:2.2.2.2:4");
  CHECK(canonical_fill_map(c, 2, 11) == std::vector<Point>{4, 5, 8, 9, 10});
  CHECK(canonical_fill_map(c, 0, 8) == std::vector<Point>{0, 1, 9, 10, 11});
}
