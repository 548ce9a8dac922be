#include <doctest.h>

#include "oracles.hpp"
#include "qpack/bounds.hpp"

using namespace qpack;

namespace {

// Nested floors written out in plain 64-bit arithmetic.
std::uint64_t johnson_u64(std::uint64_t n) {
  if (n < 4) return 0;
  std::uint64_t inner = (n - 2) / 2;
  std::uint64_t mid = (n - 1) * inner / 3;
  if (n % 6 == 0) mid -= 1;
  return n * mid / 4;
}

std::uint64_t binom3(std::uint64_t n) { return oracle::c3(n); }

}  // namespace

TEST_CASE("Johnson bound at the direct-construction orders") {
  CHECK(johnson_bound(23) == 419);
  CHECK(johnson_bound(35) == 1583);
  CHECK(johnson_bound(47) == 3959);
  CHECK(johnson_bound(59) == 7979);
  CHECK(johnson_bound(71) == 14075);
  CHECK(johnson_bound(11) == 35);
  CHECK(johnson_bound(17) == 157);
  CHECK(johnson_bound(6) == 3);
  CHECK(johnson_bound(3) == 0);
  CHECK(johnson_bound(0) == 0);
}

TEST_CASE("Johnson bound equals the brute-force maximum for n <= 8") {
  for (std::uint32_t n = 4; n <= 8; ++n) CHECK(johnson_bound(n) == oracle::max_packing_size(n));
}

TEST_CASE("Johnson bound matches 64-bit nested floors and never exceeds C(n,3)/4") {
  for (std::uint64_t n = 0; n <= 10000; ++n) {
    REQUIRE(johnson_bound(n) == johnson_u64(n));
    REQUIRE(4 * johnson_bound(n) <= big_binomial(n, 3));
  }
}

TEST_CASE("closed form on n = 11 (mod 12)") {
  CHECK(closed_form_11mod12(35) == 1583);
  CHECK(closed_form_11mod12(11) == 35);
  CHECK(closed_form_11mod12(83) == 22679);
  for (std::uint64_t n = 11; n <= 10007; n += 12) REQUIRE(closed_form_11mod12(n) == johnson_bound(n));
  try {
    closed_form_11mod12(12);
    FAIL("accepted n=12");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidCongruence);
  }
}

TEST_CASE("hole-fill targets") {
  CHECK(hpqs_target(12, 6) == 156);
  CHECK(hpqs_target(24, 12) == 1548);
  CHECK(hpqs_target(4, 1) == 1);
}

TEST_CASE("CQS block counts") {
  CHECK(cqs_block_count(GroupType::parse("2^3:2")) == 11);
  CHECK(cqs_block_count(GroupType::parse("1^8:0")) == 14);
  CHECK(cqs_block_count(GroupType::parse("2^3:1")) == 8);
  CHECK(cqs_stem_point_block_count(GroupType::parse("2^3:2")) == 4);
  CHECK(cqs_block_count(GroupType::parse("3^3:5")) == 54);           // (364 - 168 + 20) / 4
  CHECK_THROWS_AS(cqs_block_count(GroupType::parse("1^3:2")), Error);  // 7/4

  // the |B| expression with a designated group, against the all-groups form
  const std::uint64_t u = 72, s = 12, g = 24;
  BigInt designated = (big_binomial(u + s, 3) - big_binomial(g + s, 3) -
                       2 * (big_binomial(g + s, 3) - big_binomial(s, 3))) / 4;
  CHECK(cqs_block_count(GroupType::parse("24^3:12", 24)) == designated);

  // S(3,4,v) counts
  for (std::uint64_t v : {4u, 8u, 10u, 14u, 16u}) {
    CHECK(cqs_block_count(GroupType({{1, v}}, 0)) == binom3(v) / 4);
  }
}

TEST_CASE("assembly count polynomial") {
  CHECK(assembly_predicted_count(GroupType::parse("24^3:12", 24)) == 22679);
  CHECK(assembly_predicted_count(GroupType::parse("24^1:12", 24)) == 1583);
  // the polynomial is not integral at u=6, s=2
  CHECK_THROWS_AS(assembly_predicted_count(GroupType::parse("2^3:2", 2)), Error);
  CHECK(ingredient_sum_count(GroupType::parse("2^3:2", 2)) == 7);
}

namespace {

/// Checks one type; returns whether it belongs to a congruence family.
bool check_family_type(const GroupType& t, std::size_t& polynomial_checked) {
  if (!satisfies_stem0_congruences(t) && !satisfies_stem6_congruences(t)) return false;
  const auto n = t.points() - 1;
  REQUIRE(ingredient_sum_count(t) == johnson_bound(n));
  if (n % 12 == 11) {
    REQUIRE(assembly_predicted_count(t) == johnson_bound(n));
    ++polynomial_checked;
  }
  return true;
}

}  // namespace

TEST_CASE("congruence families give the Johnson bound: every (s, g0, g1, a) with u + s - 1 <= 500") {
  std::size_t checked = 0, polynomial_checked = 0;
  const std::uint64_t limit = 500;
  for (std::uint64_t s = 6; s <= limit; s += 6) {
    for (std::uint64_t g0 = 6; g0 + s - 1 <= limit; g0 += 6) {
      checked += check_family_type(GroupType({{g0, 1}}, s, g0), polynomial_checked);
      for (std::uint64_t g1 = 12; g0 + g1 + s - 1 <= limit; g1 += 12) {
        for (std::uint64_t a = 1; g0 + a * g1 + s - 1 <= limit; ++a) {
          std::vector<GroupCount> entries{{g0, 1}};
          if (g1 == g0) {
            entries[0].multiplicity += a;
          } else {
            entries.push_back({g1, a});
          }
          checked += check_family_type(GroupType(entries, s, g0), polynomial_checked);
        }
      }
    }
  }
  CHECK(checked > 10000);
  CHECK(polynomial_checked > 1000);
}

TEST_CASE("congruence families give the Johnson bound: one and two groups up to u + s - 1 = 2000") {
  std::size_t checked = 0, polynomial_checked = 0;
  const std::uint64_t limit = 2000;
  for (std::uint64_t s = 6; s <= limit; s += 6) {
    for (std::uint64_t g0 = 6; g0 + s - 1 <= limit; g0 += 6) {
      checked += check_family_type(GroupType({{g0, 1}}, s, g0), polynomial_checked);
      for (std::uint64_t g1 : {12u, 24u, 48u}) {
        if (g0 + g1 + s - 1 > limit) continue;
        std::vector<GroupCount> entries{{g0, 1}};
        if (g1 == g0) {
          entries[0].multiplicity += 1;
        } else {
          entries.push_back({g1, 1});
        }
        checked += check_family_type(GroupType(entries, s, g0), polynomial_checked);
      }
    }
  }
  CHECK(checked > 50000);
  CHECK(polynomial_checked > 5000);
}

TEST_CASE("congruence predicates") {
  CHECK(satisfies_stem0_congruences(GroupType::parse("24^3:12", 24)));
  CHECK(!satisfies_stem6_congruences(GroupType::parse("24^3:12", 24)));
  CHECK(satisfies_stem6_congruences(GroupType::parse("24^4 18^1:6", 18)));
  CHECK(!satisfies_stem6_congruences(GroupType::parse("24^4 18^1:6", 24)));
  CHECK(!satisfies_stem0_congruences(GroupType::parse("2^3:2", 2)));
}
