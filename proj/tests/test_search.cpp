#include <doctest.h>

#include "oracles.hpp"
#include "qpack/assets.hpp"
#include "qpack/bounds.hpp"
#include "qpack/design_io.hpp"
#include "qpack/search.hpp"
#include "qpack/verify.hpp"

using namespace qpack;

namespace {

SearchBudget small_budget(std::uint64_t seed = 0) {
  SearchBudget b;
  b.seed = seed;
  b.node_limit = 5'000'000;
  b.time_limit = 60;
  b.restarts = 4;
  return b;
}

}  // namespace

TEST_CASE("exact values for n = 4..8: found at J(n), refuted at J(n)+1") {
  for (std::uint32_t n = 4; n <= 8; ++n) {
    CAPTURE(n);
    const auto j = to_u64(johnson_bound(n));
    REQUIRE(j == oracle::max_packing_size(n));
    auto found = backtrack_max_packing(n, j, std::nullopt, small_budget());
    CHECK(found.status == SearchStatus::Found);
    REQUIRE(found.design);
    CHECK(found.design->blocks().size() == j);
    CHECK(oracle::is_packing(found.design->blocks()));
    auto beyond = backtrack_max_packing(n, j + 1, std::nullopt, small_budget());
    CHECK(beyond.status == SearchStatus::ExhaustedOptimal);
  }
}

TEST_CASE("n = 8 at 14 blocks is a Steiner system") {
  auto o = backtrack_max_packing(8, 14, std::nullopt, small_budget());
  REQUIRE(o.status == SearchStatus::Found);
  CHECK(oracle::leave(8, o.design->blocks()).empty());
}

TEST_CASE("deterministic, and the serial driver gives the same outcome") {
  PackingProblem p{11, 35, std::nullopt, std::nullopt};
  SearchBudget b = small_budget(2);
  b.node_limit = 2'000'000;
  auto a = backtrack_max_packing(p, b);
  auto c = backtrack_max_packing(p, b);
  auto s = backtrack_max_packing_serial(p, b);
  REQUIRE(a.status == SearchStatus::Found);
  CHECK(a.nodes == c.nodes);
  CHECK(a.restart == c.restart);
  CHECK(*a.design == *c.design);
  CHECK(s.status == a.status);
  CHECK(s.nodes == a.nodes);
  CHECK(s.restart == a.restart);
  CHECK(*s.design == *a.design);
}

TEST_CASE("restart seeds are well mixed") {
  CHECK(restart_seed(0, 1) != restart_seed(1, 0));
  CHECK(restart_seed(1, 1) != restart_seed(0, 2));
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("embedded MPQS(11) regenerates byte for byte") {
  auto text = embedded_asset("ingredients/MPQS_11.pqs");
  REQUIRE(text);
  SearchBudget b;
  b.seed = 2;
  b.node_limit = 2'000'000;
  b.restarts = 32;
  auto o = backtrack_max_packing(PackingProblem{11, 35, std::nullopt, std::nullopt}, b);
  REQUIRE(o.status == SearchStatus::Found);
  CHECK(serialize_design(*o.design, o.provenance()) == *text);
}

TEST_CASE("embedded HPQS(17,5) regenerates byte for byte") {
  auto text = embedded_asset("ingredients/HPQS_17_5.pqs");
  REQUIRE(text);
  auto file = parse_design(*text);
  REQUIRE(file.provenance);
  CHECK(file.provenance->find("seed=0") != std::string::npos);
  SearchBudget b;
  b.seed = 0;
  b.node_limit = 100'000'000;
  b.restarts = 32;
  PackingProblem p{17, 156, std::vector<Point>{12, 13, 14, 15, 16},
                   PermutationSpec::parse(17, "(0 1 2 3 4 5 6 7 8 9 10 11)(12 13 14)(15 16)")};
  auto o = backtrack_max_packing(p, b);
  REQUIRE(o.status == SearchStatus::Found);
  CHECK(serialize_design(*o.design, o.provenance()) == *text);
  CHECK(check_packing(*o.design).ok);
}

TEST_CASE("holey search respects the hole") {
  auto o = backtrack_max_packing(8, to_u64(johnson_bound(8) - johnson_bound(4)), std::vector<Point>{4, 5, 6, 7},
                                 small_budget());
  REQUIRE(o.status == SearchStatus::Found);
  std::vector<Point> hole{4, 5, 6, 7};
  CHECK(check_hole(*o.design, hole));
}

TEST_CASE("malformed problems") {
  auto expect_invalid = [](const PackingProblem& p) {
    try {
      backtrack_max_packing(p, small_budget());
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidTarget);
    }
  };
  expect_invalid({8, 3, std::vector<Point>{1, 9}, std::nullopt});
  expect_invalid({8, 3, std::nullopt, PermutationSpec::parse(9, "(0 1)")});
}

TEST_CASE("budget exhaustion is reported as such") {
  SearchBudget b = small_budget();
  b.node_limit = 50;
  b.restarts = 1;
  auto o = backtrack_max_packing(11, 35, std::nullopt, b);
  CHECK(o.status == SearchStatus::BudgetExceeded);
  REQUIRE(o.design);
  CHECK(check_packing(*o.design).ok);
}

TEST_CASE("greedy packings are valid") {
  CHECK(greedy_packing(4, 0).blocks().size() == 1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto d = greedy_packing(8, seed);
    CHECK(oracle::is_packing(d.blocks()));
    CHECK(d.blocks().size() <= 14);
  }
  auto d23 = greedy_packing(23, 7);
  CHECK(check_packing(d23).ok);
  CHECK(d23.blocks().size() <= 419);
  auto holey = greedy_packing(12, 3, std::vector<Point>{8, 9, 10, 11});
  std::vector<Point> hole{8, 9, 10, 11};
  CHECK(check_hole(holey, hole));
}

TEST_CASE("candelabra search") {
  auto c = search_cqs(GroupType::parse("2^3:2"), small_budget());
  REQUIRE(c.status == SearchStatus::Found);
  REQUIRE(c.cqs);
  CHECK(c.cqs->blocks().size() == 11);
  CHECK(check_cqs(*c.cqs).ok);

  auto sqs = search_cqs(GroupType::parse("1^8:0"), small_budget());
  REQUIRE(sqs.status == SearchStatus::Found);
  CHECK(sqs.cqs->blocks().size() == 14);

  auto t231 = search_cqs(GroupType::parse("2^3:1"), small_budget());
  CHECK(t231.status != SearchStatus::BudgetExceeded);
  if (t231.status == SearchStatus::Found) CHECK(t231.cqs->blocks().size() == 8);

  CHECK_THROWS_AS(search_cqs(GroupType::parse("1^3:2"), small_budget()), Error);
}
