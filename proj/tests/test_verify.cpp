#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "qpack/construct.hpp"
#include "qpack/ingredients.hpp"
#include "qpack/search.hpp"
#include "qpack/verify.hpp"

using namespace qpack;

namespace {

/// Random 4-subsets, possibly overlapping in triples.
PackingDesign random_blocks(std::uint32_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<Block> blocks;
  while (blocks.size() < count) {
    std::array<Point, 4> p{};
    std::set<Point> used;
    for (auto& q : p) {
      do q = static_cast<Point>(rng() % n);
      while (!used.insert(q).second);
    }
    blocks.insert(Block(p));
  }
  return PackingDesign(n, {blocks.begin(), blocks.end()});
}

std::set<oracle::T3> conflict_triples(const std::vector<Conflict>& cs) {
  std::set<oracle::T3> out;
  for (const auto& c : cs) out.insert({c.triple[0], c.triple[1], c.triple[2]});
  return out;
}

/// Triples covered at least twice, by direct counting.
std::set<oracle::T3> doubly_covered(const std::vector<Block>& blocks) {
  std::map<oracle::T3, int> count;
  for (const auto& b : blocks)
    for (const auto& t : oracle::triples_of(b)) ++count[t];
  std::set<oracle::T3> out;
  for (const auto& [t, c] : count)
    if (c > 1) out.insert(t);
  return out;
}

}  // namespace

TEST_CASE("check_packing basics") {
  auto r = check_packing(PackingDesign(5, {Block(0, 1, 2, 3), Block(0, 1, 2, 4)}));
  CHECK_FALSE(r.ok);
  REQUIRE(r.conflicts.size() == 1);
  CHECK(r.conflicts[0].triple == Triple(0, 1, 2));
  CHECK(r.conflicts[0].first_block == 0);
  CHECK(r.conflicts[0].second_block == 1);

  auto empty = check_packing(PackingDesign(9, {}));
  CHECK(empty.ok);
  CHECK(empty.leave_size == oracle::c3(9));

  auto m23 = check_packing(build_mpqs(23, builtin_ingredients()).design);
  CHECK(m23.ok);
  CHECK(m23.block_count == 419);
  CHECK(m23.conflicts.empty());
  CHECK(m23.summary_line() == "VERIFY ok=true n=23 blocks=419 bound=419 leave=95 conflicts=0");
}

TEST_CASE("all conflicts are reported") {
  auto d = PackingDesign(6, {Block(0, 1, 2, 3), Block(0, 1, 2, 4), Block(0, 1, 2, 5), Block(3, 4, 5, 0),
                             Block(3, 4, 5, 1)});
  auto r = check_packing(d);
  CHECK(conflict_triples(r.conflicts) == doubly_covered(d.blocks()));
  CHECK(r.conflicts.size() == 3);
}

TEST_CASE("holes") {
  auto hpqs = builtin_ingredients().find_packing("HPQS:17:5");
  REQUIRE(hpqs);
  REQUIRE(hpqs->hole());
  CHECK(check_hole(*hpqs, *hpqs->hole()));
  CHECK(check_packing(*hpqs).ok);

  auto m23 = build_mpqs(23, builtin_ingredients()).design;
  std::vector<Point> y{0, 1, 2, 5};
  bool scan = std::any_of(m23.blocks().begin(), m23.blocks().end(), [&](const Block& b) { return b.meet(y) >= 3; });
  CHECK(scan);
  CHECK(check_hole(m23, y) == !scan);

  std::vector<Point> pair{3, 7};
  CHECK(check_hole(m23, pair));

  auto with_hole = PackingDesign(6, {Block(0, 1, 2, 3)}, std::vector<Point>{0, 1, 2});
  auto r = check_packing(with_hole);
  CHECK_FALSE(r.ok);
  CHECK(r.hole_violations.size() == 1);
}

TEST_CASE("check_hole holds exactly when every hole triple is in the leave") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto d = greedy_packing(10, trial);
    std::vector<Point> y;
    for (Point p = 0; p < 10; ++p)
      if (rng() % 3 == 0) y.push_back(p);
    auto leave = oracle::leave(10, d.blocks());
    bool all_in = true;
    for (std::size_t i = 0; i < y.size(); ++i)
      for (std::size_t j = i + 1; j < y.size(); ++j)
        for (std::size_t k = j + 1; k < y.size(); ++k) all_in &= leave.count({y[i], y[j], y[k]}) == 1;
    CHECK(check_hole(d, y) == all_in);
  }
}

TEST_CASE("compute_leave") {
  CHECK(compute_leave(PackingDesign(4, {Block(0, 1, 2, 3)})).empty());
  auto bad = PackingDesign(5, {Block(0, 1, 2, 3), Block(0, 1, 2, 4)});
  try {
    compute_leave(bad);
    FAIL("leave of a non-packing");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAPacking);
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto d = greedy_packing(15, seed);
    auto leave = compute_leave(d);
    CHECK(leave.size() + 4 * d.blocks().size() == oracle::c3(15));
    std::set<oracle::T3> mine;
    for (const auto& t : leave) mine.insert({t[0], t[1], t[2]});
    CHECK(mine == oracle::leave(15, d.blocks()));
  }
}

TEST_CASE("check_optimal") {
  CHECK(check_optimal(build_mpqs(47, builtin_ingredients()).design));
  auto sqs8 = builtin_ingredients().find_packing("MPQS:8");
  REQUIRE(sqs8);
  CHECK(sqs8->blocks().size() == 14);
  CHECK(check_optimal(*sqs8));
  auto m23 = build_mpqs(23, builtin_ingredients()).design;
  std::vector<Block> fewer(m23.blocks().begin() + 1, m23.blocks().end());
  CHECK_FALSE(check_optimal(PackingDesign(23, fewer)));
}

TEST_CASE("check_cqs") {
  auto c = builtin_ingredients().find_cqs("CQS:2.2.2:2");
  REQUIRE(c);
  auto r = check_cqs(*c);
  CHECK(r.ok);
  CHECK(r.block_count == 11);

  // an SQS(8) presented as type 1^8:0
  auto sqs8 = builtin_ingredients().find_packing("MPQS:8");
  std::vector<std::vector<Point>> singletons;
  for (Point p = 0; p < 8; ++p) singletons.push_back({p});
  auto s = check_cqs(CandelabraSystem(singletons, {}, sqs8->blocks()));
  CHECK(s.ok);
  CHECK(s.block_count == 14);

  // cover one transverse triple twice
  auto blocks = c->blocks();
  blocks.back() = Block(0, 2, 4, 7);
  auto twice = check_cqs(CandelabraSystem(c->groups(), c->stem(), blocks));
  CHECK_FALSE(twice.ok);
}

TEST_CASE("CQS axiom restated: no block keeps 3 points of one group once the stem is removed") {
  for (const char* sig : {"CQS:2.2.2:2", "CQS:2.2.2.2:4"}) {
    auto c = builtin_ingredients().find_cqs(sig);
    REQUIRE(c);
    REQUIRE(check_cqs(*c).ok);
    for (const auto& b : c->blocks()) {
      std::map<int, int> per_group;
      for (auto p : b.points())
        if (c->group_of(p) >= 0) ++per_group[c->group_of(p)];
      for (auto [g, k] : per_group) CHECK(k < 3);
    }
  }
}

TEST_CASE("parallel kernels agree with the serial references") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    CAPTURE(seed);
    const std::uint32_t n = 12 + static_cast<std::uint32_t>(seed) * 3;
    auto d = seed % 2 ? random_blocks(n, 40 + seed * 20, seed) : greedy_packing(n, seed);
    auto cs = kernels::find_conflicts_serial(n, d.blocks());
    auto cp = kernels::find_conflicts_parallel(n, d.blocks());
    CHECK(cs == cp);
    CHECK(conflict_triples(cs) == doubly_covered(d.blocks()));
    auto vs = kernels::coverage_serial(n, d.blocks());
    auto vp = kernels::coverage_parallel(n, d.blocks());
    CHECK(vs == vp);
    CHECK(kernels::uncovered_serial(n, vs) == kernels::uncovered_parallel(n, vp));

    auto rs = check_packing_serial(d);
    auto rp = check_packing(d);
    CHECK(rs.ok == rp.ok);
    CHECK(rs.conflicts == rp.conflicts);
    CHECK(rs.leave_size == rp.leave_size);
    CHECK(rs.summary_line() == rp.summary_line());
  }
  for (auto n : direct_orders()) {
    auto d = build_mpqs(n, builtin_ingredients()).design;
    CHECK(compute_leave(d) == compute_leave_serial(d));
    CHECK(check_packing(d).summary_line() == check_packing_serial(d).summary_line());
  }
}
