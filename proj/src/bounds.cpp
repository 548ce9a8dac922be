#include "qpack/bounds.hpp"

#include "qpack/error.hpp"

namespace qpack {

namespace {

BigInt exact_div(const BigInt& num, unsigned den, const std::string& what) {
  if (num % den != 0) {
    throw Error(ErrorKind::InfeasibleType, what + " is not integral");
  }
  return num / den;
}

std::uint64_t designated(const GroupType& t) {
  if (!t.special()) throw Error(ErrorKind::InfeasibleType, "type needs a designated group g_0");
  return *t.special();
}

}  // namespace

BigInt big_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

std::uint64_t to_u64(const BigInt& x) {
  if (x < 0 || x > BigInt(std::numeric_limits<std::uint64_t>::max())) {
    throw Error(ErrorKind::InvalidTarget, "count does not fit in 64 bits");
  }
  return x.convert_to<std::uint64_t>();
}

BigInt johnson_bound(std::uint64_t n) {
  if (n < 4) return 0;
  BigInt nn = n;
  BigInt inner = (nn - 2) / 2;
  BigInt middle = ((nn - 1) * inner) / 3;
  if (n % 6 == 0) middle -= 1;
  return (nn * middle) / 4;
}

BigInt closed_form_11mod12(std::uint64_t n) {
  if (n % 12 != 11) {
    throw Error(ErrorKind::InvalidCongruence,
                "closed form needs n = 11 (mod 12), got n=" + std::to_string(n));
  }
  BigInt nn = n;
  BigInt num = nn * nn * nn - 4 * nn * nn + nn - 18;
  if (num % 24 != 0) throw Error(ErrorKind::InvalidCongruence, "closed form not integral");
  return num / 24;
}

BigInt hpqs_target(std::uint64_t g, std::uint64_t s) {
  if (g + s < 1) return 0;
  return johnson_bound(g + s - 1) - (s >= 1 ? johnson_bound(s - 1) : BigInt(0));
}

BigInt cqs_block_count(const GroupType& t) {
  const std::uint64_t s = t.stem();
  BigInt num = big_binomial(t.points(), 3);
  for (auto g : t.sizes()) num -= big_binomial(g + s, 3);
  num += BigInt(t.group_count() - 1) * big_binomial(s, 3);
  return exact_div(num, 4, "CQS block count for " + t.to_string());
}

BigInt cqs_stem_point_block_count(const GroupType& t) {
  BigInt num = big_binomial(t.group_points(), 2);
  for (auto g : t.sizes()) num -= big_binomial(g, 2);
  return exact_div(num, 3, "stem-point block count for " + t.to_string());
}

BigInt assembly_predicted_count(const GroupType& t) {
  BigInt u = t.group_points();
  BigInt s = t.stem();
  BigInt num = u * u * u + u * u * (3 * s - 7) + u * (3 * s * s - 14 * s + 12) + s * s * s -
               7 * s * s + 12 * s - 24;
  return exact_div(num, 24, "assembly count for " + t.to_string());
}

BigInt ingredient_sum_count(const GroupType& t) {
  const std::uint64_t g0 = designated(t);
  const std::uint64_t s = t.stem();
  if (s == 0) throw Error(ErrorKind::InfeasibleType, "assembly needs a non-empty stem");
  BigInt total = cqs_block_count(t) - cqs_stem_point_block_count(t);
  total += johnson_bound(g0 + s - 1);
  for (const auto& e : t.others()) total += BigInt(e.multiplicity) * hpqs_target(e.size, s);
  return total;
}

bool satisfies_stem6_congruences(const GroupType& t) {
  if (!t.special() || t.stem() % 12 != 6 || *t.special() % 6 != 0) return false;
  for (const auto& e : t.others()) {
    if (e.size % 12 != 0) return false;
  }
  return true;
}

bool satisfies_stem0_congruences(const GroupType& t) {
  if (!t.special() || t.stem() == 0 || t.stem() % 12 != 0) return false;
  for (const auto& e : t.entries()) {
    if (e.size % 12 != 0) return false;
  }
  return true;
}

}  // namespace qpack
