#include "qpack/one_factor.hpp"

#include <algorithm>
#include <numeric>

namespace qpack {

std::uint32_t circular_difference(Point a, Point b, std::uint32_t m) {
  std::uint32_t fwd = (b + m - a % m) % m;
  std::uint32_t bwd = (m - fwd) % m;
  return std::min(fwd, bwd);
}

bool stern_lenz_feasible(const CirculantSpec& spec) {
  return std::any_of(spec.differences.begin(), spec.differences.end(), [&](std::uint32_t d) {
    return d != 0 && (spec.m / std::gcd(d, spec.m)) % 2 == 0;
  });
}

std::pair<OneFactor, OneFactor> factor_pair(std::uint32_t d, std::uint32_t m) {
  if (m == 0 || m % 2 != 0) {
    throw Error(ErrorKind::InvalidModulus, "modulus must be even, got " + std::to_string(m));
  }
  if (d == 0 || 2 * d >= m) {
    throw Error(ErrorKind::InvalidModulus,
                "factor_pair needs 1 <= d < m/2 (got d=" + std::to_string(d) +
                    ", m=" + std::to_string(m) + "); use half_matching for d = m/2");
  }
  const std::uint32_t cycles = std::gcd(d, m);
  const std::uint32_t length = m / cycles;
  if (length % 2 != 0) {
    throw Error(ErrorKind::NotOneFactorable,
                "G({" + std::to_string(d) + "}) over Z_" + std::to_string(m) +
                    " has odd cycles of length " + std::to_string(length));
  }
  OneFactor first{m, d, {}};
  OneFactor second{m, m - d, {}};
  for (std::uint32_t r = 0; r < cycles; ++r) {
    Point v = r;
    for (std::uint32_t k = 0; k < length; ++k) {
      Point w = (v + d) % m;
      (k % 2 == 0 ? first : second).pairs.emplace_back(v, w);
      v = w;
    }
  }
  return {std::move(first), std::move(second)};
}

OneFactor half_matching(std::uint32_t m) {
  if (m == 0 || m % 2 != 0) {
    throw Error(ErrorKind::InvalidModulus, "half matching needs even m, got " + std::to_string(m));
  }
  OneFactor f{m, m / 2, {}};
  for (Point i = 0; i < m / 2; ++i) f.pairs.emplace_back(i, i + m / 2);
  return f;
}

bool verify_one_factor(const OneFactor& f) {
  if (f.m == 0 || f.label == 0 || f.label >= f.m || f.pairs.size() * 2 != f.m) return false;
  const std::uint32_t want = std::min(f.label, f.m - f.label);
  std::vector<bool> seen(f.m, false);
  for (const auto& p : f.pairs) {
    if (p.hi >= f.m || p.lo == p.hi || seen[p.lo] || seen[p.hi]) return false;
    seen[p.lo] = seen[p.hi] = true;
    if (circular_difference(p.lo, p.hi, f.m) != want) return false;
  }
  return true;
}

OneFactor factor_for_label(std::uint32_t label, std::uint32_t m) {
  if (label == 0 || label >= m) {
    throw Error(ErrorKind::InvalidModulus,
                "difference label " + std::to_string(label) + " invalid over Z_" + std::to_string(m));
  }
  if (2 * label == m) return half_matching(m);
  if (2 * label < m) return factor_pair(label, m).first;
  return factor_pair(m - label, m).second;
}

const OneFactor& FactorCache::get(std::uint32_t label) {
  auto it = cache_.find(label);
  if (it == cache_.end()) it = cache_.emplace(label, factor_for_label(label, m_)).first;
  return it->second;
}

}  // namespace qpack
