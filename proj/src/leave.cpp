#include "qpack/leave.hpp"

#include <algorithm>
#include <set>

#include "qpack/one_factor.hpp"

namespace qpack {

std::string LeaveFamily::describe() const {
  switch (kind) {
    case Kind::FactorDiagonal:
      return "{x_i, a, b}, {a,b} in F_A(i,i), " + std::to_string(first_row) + " <= i <= " +
             std::to_string(last_row);
    case Kind::CyclicOrbit:
      return "{j+" + std::to_string(base[0]) + ", j+" + std::to_string(base[1]) + ", j+" +
             std::to_string(base[2]) + "}";
    case Kind::SubdesignLeave:
      return "unused triples of " + signature;
    case Kind::PermutationOrbit:
      return "orbit of {" + std::to_string(base[0]) + ", " + std::to_string(base[1]) + ", " +
             std::to_string(base[2]) + "}";
  }
  return {};
}

std::vector<Triple> expand_family(const LeaveFamily& family, const LeaveContext& context) {
  const std::uint32_t m = context.points.modulus;
  std::set<Triple> out;
  switch (family.kind) {
    case LeaveFamily::Kind::FactorDiagonal: {
      if (!context.array) throw Error(ErrorKind::MissingContext, "no factor array bound");
      FactorCache factors(m);
      for (std::size_t i = family.first_row; i <= family.last_row; ++i) {
        const auto& label = context.array->at(i, i);
        if (!label) {
          throw Error(ErrorKind::MissingContext, "diagonal entry A(" + std::to_string(i) + "," +
                                                     std::to_string(i) + ") is empty");
        }
        Point x = mixed_point_label(context.points, MixedName::infinite(static_cast<std::uint32_t>(i)));
        for (const auto& pr : factors.get(*label).pairs) out.emplace(x, pr.lo, pr.hi);
      }
      break;
    }
    case LeaveFamily::Kind::CyclicOrbit: {
      if (m == 0) throw Error(ErrorKind::MissingContext, "no modulus bound for a cyclic family");
      for (std::uint32_t j = 0; j < m; ++j) {
        out.emplace((family.base[0] + j) % m, (family.base[1] + j) % m, (family.base[2] + j) % m);
      }
      break;
    }
    case LeaveFamily::Kind::SubdesignLeave: {
      auto it = context.subdesign_leaves.find(family.signature);
      if (it == context.subdesign_leaves.end()) {
        throw Error(ErrorKind::MissingContext, "no leave bound for " + family.signature);
      }
      out.insert(it->second.begin(), it->second.end());
      break;
    }
    case LeaveFamily::Kind::PermutationOrbit: {
      if (!context.permutation) throw Error(ErrorKind::MissingContext, "no permutation bound");
      const auto& p = *context.permutation;
      Triple t(family.base[0], family.base[1], family.base[2]);
      while (out.insert(t).second) t = Triple(p(t[0]), p(t[1]), p(t[2]));
      break;
    }
  }
  return {out.begin(), out.end()};
}

LeaveComparison compare_leave(std::span<const Triple> leave, const LeavePattern& pattern,
                              const LeaveContext& context) {
  LeaveComparison result;
  std::set<Triple> produced;
  for (const auto& family : pattern.families) {
    auto triples = expand_family(family, context);
    result.family_sizes.push_back(triples.size());
    for (const auto& t : triples) {
      if (!produced.insert(t).second) result.overlaps.push_back(t);
    }
  }
  result.pattern_size = produced.size();
  std::set<Triple> actual(leave.begin(), leave.end());
  std::set_difference(actual.begin(), actual.end(), produced.begin(), produced.end(),
                      std::back_inserter(result.unexplained));
  std::set_difference(produced.begin(), produced.end(), actual.begin(), actual.end(),
                      std::back_inserter(result.spurious));
  result.equal = result.unexplained.empty() && result.spurious.empty();
  return result;
}

bool match_leave(std::span<const Triple> leave, const LeavePattern& pattern,
                 const LeaveContext& context) {
  auto r = compare_leave(leave, pattern, context);
  return r.equal && r.overlaps.empty();
}

}  // namespace qpack
