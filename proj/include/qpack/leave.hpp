#pragma once

// Symbolic descriptions of a construction's leave (its uncovered triples)
// and their expansion to concrete triple sets.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpack/core.hpp"
#include "qpack/factor_array.hpp"
#include "qpack/permutation.hpp"

namespace qpack {

struct LeaveFamily {
  enum class Kind {
    /// {x_i, a, b} for {a,b} in F_{A(i,i)}, rows first_row..last_row
    FactorDiagonal,
    /// {j+c0, j+c1, j+c2} for j in Z_m, deduplicated
    CyclicOrbit,
    /// the uncovered non-hole triples of a placed ingredient design
    SubdesignLeave,
    /// the orbit of {c0, c1, c2} under the developing permutation
    PermutationOrbit,
  };

  Kind kind = Kind::CyclicOrbit;
  std::size_t first_row = 0;
  std::size_t last_row = 0;
  std::array<std::uint32_t, 3> base{};
  std::string signature;

  std::string describe() const;
};

struct LeavePattern {
  std::vector<LeaveFamily> families;
};

/// Bindings that give a leave pattern its meaning for one concrete build.
struct LeaveContext {
  MixedPoints points;
  std::optional<FactorArray> array;
  /// Leaves of the placed ingredient copies, in the construction's labels.
  std::map<std::string, std::vector<Triple>> subdesign_leaves;
  /// Set when the construction develops under a permutation.
  std::optional<PermutationSpec> permutation;
};

/// Throws MissingContext when the family refers to a binding the context lacks.
std::vector<Triple> expand_family(const LeaveFamily& family, const LeaveContext& context);

struct LeaveComparison {
  bool equal = false;
  /// triples in the leave that no family produces
  std::vector<Triple> unexplained;
  /// triples some family produces that are covered by a block
  std::vector<Triple> spurious;
  /// triples produced by more than one family
  std::vector<Triple> overlaps;
  std::size_t pattern_size = 0;
  std::vector<std::size_t> family_sizes;
};

LeaveComparison compare_leave(std::span<const Triple> leave, const LeavePattern& pattern,
                              const LeaveContext& context);

/// Exact set equality between `leave` and the expanded pattern, with the
/// families pairwise disjoint.
bool match_leave(std::span<const Triple> leave, const LeavePattern& pattern,
                 const LeaveContext& context);

}  // namespace qpack
