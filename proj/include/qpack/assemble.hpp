#pragma once

// Recursive assembly: a candelabra system (X, S, G, B) plus fills on each
// group. Pick x in S, put S' = S \ {x}, keep the CQS blocks missing x, add an
// MPQS on G0 u S' for the special group and an HPQS with hole S' on G u S' for
// every other group. The result is a packing on X \ {x}.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpack/bounds.hpp"
#include "qpack/core.hpp"
#include "qpack/group_type.hpp"

namespace qpack {

/// A fill design and where its points go. map[k] is the CQS label of fill
/// point k; an empty map means the canonical alignment: fill points 0..|G|-1
/// onto G in increasing order, the rest onto S' in increasing order.
struct FillBinding {
  PackingDesign design;
  std::vector<Point> map;
};

struct AssemblyInput {
  CandelabraSystem cqs;
  std::size_t special_group = 0;
  /// Defaults to the largest stem label.
  std::optional<Point> stem_point;
  FillBinding special_fill;
  /// Keyed by group index; one entry for every group except the special one.
  std::map<std::size_t, FillBinding> group_fills;
};

/// Which congruence family the group type belongs to, if any. Both give an
/// optimal result when every fill meets its block-count target.
enum class Congruences {
  None,
  /// s = 6 (mod 12), g_0 = 0 (mod 6), other g_i = 0 (mod 12)
  Stem6,
  /// s = g_i = 0 (mod 12) for all groups
  Stem0,
};
std::string_view to_string(Congruences c);
Congruences classify(const GroupType& t);

/// One counting identity: what was measured, what the formula says (absent
/// when it is not integral for these parameters) and whether it was enforced.
struct CountLine {
  BigInt measured = 0;
  std::optional<BigInt> formula;
  bool asserted = false;
};

struct CountingRecord {
  CountLine cqs_blocks;     // |B|
  CountLine stem_blocks;    // |B_x|, blocks through x
  CountLine kept_blocks;    // |B'| = |B| - |B_x|
  CountLine special_fill;   // |C_G|
  CountLine group_fills;    // sum of |C_G'|
  CountLine total;          // |A|
  /// |B| - |B_x| + J(g_0+s-1) + sum a_i (J(g_i+s-1) - J(s-1))
  BigInt ingredient_sum = 0;
  Congruences congruences = Congruences::None;
  bool fills_meet_targets = false;

  std::string to_text() const;
};

struct AssemblyResult {
  /// On X \ {x}, relabelled 0..v-2 by dropping x. Tagged MPQSClaimed when the
  /// congruences hold and every fill meets its target.
  PackingDesign design;
  Point stem_point = 0;
  GroupType type;
  CountingRecord counts;
  /// One line per fill that fell short of its block-count target
  /// (suboptimal ingredient). The packing is still valid, just not claimed.
  std::vector<std::string> suboptimal;
};

/// Throws AlignmentError (bad map, missing fill, hole not onto S'),
/// HoleViolation (fill block meets S' in 3+ points), NotAPacking (an
/// ingredient fails verification), CountingViolation (from the audit).
AssemblyResult assemble(const AssemblyInput& input);

/// The counting identities of the assembly, measured and by formula.
/// |B|, |B_x| and |B'| are always enforced; |C_G|, sum |C_G'| and the total
/// are enforced when the congruences hold and the fills meet their targets.
/// Throws CountingViolation naming the identity that failed.
CountingRecord counting_audit(const AssemblyInput& input);

/// The canonical alignment of a fill on `group` u S'.
std::vector<Point> canonical_fill_map(const CandelabraSystem& cqs, std::size_t group, Point stem_point);

}  // namespace qpack
