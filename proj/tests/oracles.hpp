#pragma once

// Reference checks written without the library's kernels: plain sets and
// direct enumeration. Slow, obviously correct, small inputs only.

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <vector>

#include "qpack/core.hpp"

namespace oracle {

using T3 = std::array<std::uint32_t, 3>;

inline std::array<T3, 4> triples_of(const qpack::Block& b) {
  auto p = b.points();
  return {T3{p[0], p[1], p[2]}, T3{p[0], p[1], p[3]}, T3{p[0], p[2], p[3]}, T3{p[1], p[2], p[3]}};
}

/// true iff no triple lies in two blocks
inline bool is_packing(const std::vector<qpack::Block>& blocks) {
  std::set<T3> seen;
  for (const auto& b : blocks)
    for (const auto& t : triples_of(b))
      if (!seen.insert(t).second) return false;
  return true;
}

inline std::set<T3> leave(std::uint32_t n, const std::vector<qpack::Block>& blocks) {
  std::set<T3> covered;
  for (const auto& b : blocks)
    for (const auto& t : triples_of(b)) covered.insert(t);
  std::set<T3> out;
  for (std::uint32_t c = 2; c < n; ++c)
    for (std::uint32_t b = 1; b < c; ++b)
      for (std::uint32_t a = 0; a < b; ++a)
        if (!covered.count({a, b, c})) out.insert({a, b, c});
  return out;
}

/// Largest packing on n points by plain branch and bound over all 4-subsets.
/// Fine up to n = 8 (70 candidate blocks).
inline std::size_t max_packing_size(std::uint32_t n) {
  std::vector<std::array<std::uint32_t, 4>> cand;
  for (std::uint32_t d = 3; d < n; ++d)
    for (std::uint32_t c = 2; c < d; ++c)
      for (std::uint32_t b = 1; b < c; ++b)
        for (std::uint32_t a = 0; a < b; ++a) cand.push_back({a, b, c, d});
  std::vector<std::size_t> chosen;
  std::size_t best = 0;
  auto compatible = [&](std::size_t i) {
    for (auto j : chosen) {
      int common = 0;
      for (auto p : cand[i])
        for (auto q : cand[j]) common += p == q;
      if (common >= 3) return false;
    }
    return true;
  };
  // each block uses 4 triples; remaining capacity bounds the gain
  auto rec = [&](auto&& self, std::size_t from) -> void {
    best = std::max(best, chosen.size());
    for (std::size_t i = from; i < cand.size(); ++i) {
      if (chosen.size() + (cand.size() - i) <= best) return;
      if (4 * (best + 1) > n * (n - 1) * (n - 2) / 6) return;
      if (!compatible(i)) continue;
      chosen.push_back(i);
      self(self, i + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  return best;
}

/// Number of sorted triples of {0..n-1}.
inline std::uint64_t c3(std::uint64_t n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

}  // namespace oracle
