#pragma once

// One-factors of single-difference circulant graphs G({d}) over Z_m.
//
// G({d}) splits into gcd(d,m) cycles r, r+d, r+2d, ... each of length
// m/gcd(d,m). When that length is even, colouring the edges of every cycle
// alternately (starting at the cycle's smallest vertex, walking by +d) gives
// two perfect matchings. Colour 0 is F_d, colour 1 is F_{m-d}.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "qpack/core.hpp"

namespace qpack {

struct VertexPair {
  Point lo = 0;
  Point hi = 0;

  VertexPair() = default;
  VertexPair(Point a, Point b) : lo(a < b ? a : b), hi(a < b ? b : a) {}

  friend auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

struct CirculantSpec {
  std::uint32_t m = 0;
  std::vector<std::uint32_t> differences;
};

struct OneFactor {
  std::uint32_t m = 0;
  /// Difference tag in 1..m-1; F_d and F_{m-d} cover the same difference class.
  std::uint32_t label = 0;
  std::vector<VertexPair> pairs;
};

/// min((b-a) mod m, (a-b) mod m)
std::uint32_t circular_difference(Point a, Point b, std::uint32_t m);

/// True iff some d in L has m/gcd(d,m) even.
bool stern_lenz_feasible(const CirculantSpec& spec);

/// {F_d, F_{m-d}} for 1 <= d < m/2. Throws NotOneFactorable when
/// m/gcd(d,m) is odd and InvalidModulus for a bad d or m.
std::pair<OneFactor, OneFactor> factor_pair(std::uint32_t d, std::uint32_t m);

/// F_{m/2} = {{i, i+m/2}}. Throws InvalidModulus for odd m.
OneFactor half_matching(std::uint32_t m);

bool verify_one_factor(const OneFactor& f);

/// F_label for any label in 1..m-1, resolving labels above m/2 to the
/// second factor of the pair for m-label.
OneFactor factor_for_label(std::uint32_t label, std::uint32_t m);

/// Memoizes factor_for_label for one modulus.
class FactorCache {
 public:
  explicit FactorCache(std::uint32_t m) : m_(m) {}

  const OneFactor& get(std::uint32_t label);
  std::uint32_t modulus() const noexcept { return m_; }

 private:
  std::uint32_t m_;
  std::map<std::uint32_t, OneFactor> cache_;
};

}  // namespace qpack
