#pragma once

// The five direct constructions: base-block tables developed under a cyclic
// or permutation action, cross blocks {x_i, x_j, a, b} driven by a factor
// array, and placed ingredient designs.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qpack/core.hpp"
#include "qpack/factor_array.hpp"
#include "qpack/leave.hpp"
#include "qpack/one_factor.hpp"
#include "qpack/permutation.hpp"
#include "qpack/verify.hpp"

namespace qpack {

class IngredientSource;

/// Z_m acting by translation on residues, fixing every x_i.
struct CyclicAction {
  MixedPoints points;
};

using GroupAction = std::variant<CyclicAction, PermutationSpec>;

std::vector<Block> develop_cyclic(const Block& base, const MixedPoints& points);
std::vector<Block> develop_permutation(const Block& base, const PermutationSpec& p);
std::vector<Block> develop(const Block& base, const GroupAction& action);

using IndexPair = std::pair<std::size_t, std::size_t>;

/// One block {x_i, x_j, a, b} per pair {a,b} of F_{A(i,j)}, for each listed
/// (i,j) with i < j. Throws MissingEntry / NotOneFactorable.
std::vector<Block> cross_factor_blocks(const FactorArray& array, std::span<const IndexPair> pairs,
                                       FactorCache& factors);

struct BaseBlockRow {
  Block block;
  std::optional<std::size_t> expected_orbit;
};

/// An ingredient placed on the infinite points x_first..x_last.
struct SubdesignPlacement {
  std::string signature;
  std::size_t first = 0;
  std::size_t last = 0;
};

/// `classes` copies of a holey ingredient, copy j on {classes*k + j} plus a
/// shared hole x_first..x_last.
struct ClassFill {
  std::string signature;
  std::uint32_t classes = 0;
  std::size_t hole_first = 0;
  std::size_t hole_last = 0;
};

/// Parsed form of a data/tables/*.tbl asset.
struct ConstructionTable {
  std::uint32_t order = 0;
  GroupAction action;
  std::optional<FactorArray> array;
  std::optional<SubdesignPlacement> subdesign;
  std::optional<ClassFill> class_fill;
  /// pairs (i,j) with both ends in this range get no cross blocks
  std::optional<IndexPair> cross_exclude;
  std::vector<BaseBlockRow> rows;
  LeavePattern leave;

  /// Throws ParseError with the offending line.
  static ConstructionTable parse(std::string_view text);

  MixedPoints points() const;
  /// The (i,j) pairs, i < j, that receive cross blocks.
  std::vector<IndexPair> cross_pairs() const;
};

/// Orders with an embedded table: 23, 35, 47, 59, 71.
std::span<const std::uint32_t> direct_orders();

/// Throws InvalidTarget for orders without a table.
const ConstructionTable& construction_table(std::uint32_t n);

struct BuildPart {
  std::string name;
  std::size_t blocks = 0;
};

struct BuildResult {
  PackingDesign design;
  std::vector<BuildPart> parts;
  std::vector<ArrayRepair> repairs;
  /// orbit size -> number of base blocks with that orbit size
  std::map<std::size_t, std::size_t> orbit_census;
  /// the blocks contributed by the placed subdesign (x-only blocks)
  std::vector<Block> subdesign_blocks;
  LeaveContext leave_context;
  std::vector<std::string> log;
};

/// Raised when the assembled parts cover a triple twice.
class ConstructionConflictError : public Error {
 public:
  ConstructionConflictError(std::vector<Conflict> conflicts, std::vector<Block> blocks,
                            const MixedPoints& points);

  const std::vector<Conflict>& conflicts() const noexcept { return conflicts_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }

 private:
  std::vector<Conflict> conflicts_;
  std::vector<Block> blocks_;
};

/// Builds the optimal packing of order n from its table. Every ingredient is
/// requested from `ingredients`; all missing ones are reported together.
BuildResult build_mpqs(std::uint32_t n, const IngredientSource& ingredients);

/// Symbolic leave description for order n.
LeavePattern leave_pattern(std::uint32_t n);

/// Checks that the parts of a construction other than the class fills are
/// pairwise triple-disjoint and leave every non-hole triple inside each
/// class-plus-hole uncovered, without needing the class-fill ingredient.
struct FallbackReport {
  bool disjoint = false;
  bool classes_free = false;
  std::size_t blocks_without_fills = 0;
  std::size_t fill_blocks_needed = 0;
  std::vector<std::string> problems;
  bool ok() const { return disjoint && classes_free && problems.empty(); }
};
FallbackReport check_without_class_fill(std::uint32_t n, const IngredientSource& ingredients);

}  // namespace qpack
