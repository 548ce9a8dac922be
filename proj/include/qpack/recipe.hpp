#pragma once

// Declarative recursive constructions: which candelabra system, which fills,
// how the fills line up. Text format, one directive per line, '#' comments:
//
//   name 24k+11/k=3
//   type 24^3:12                  group type of the CQS
//   special 24                    size of the group that gets the MPQS fill
//   congruences stem-0            stem-0 | stem-6 | none, checked against type
//   output 83                     must equal u + s - 1
//   cqs CQS:24.24.24:12
//   special-fill MPQS:35 map canonical
//   group-fill 24 HPQS:35:11 map canonical     one line per other group size
//   special-group 0               optional; default first group of that size
//   stem-point 83                 optional; default largest stem label
//
// "map canonical" aligns fill point k with the k-th point of (group ascending,
// then S' ascending). "map i0 i1 ..." gives that position for each fill point.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpack/assemble.hpp"
#include "qpack/ingredients.hpp"

namespace qpack {

struct FillSpec {
  std::string signature;
  /// Positions into (group ascending, S' ascending); empty = canonical.
  std::vector<std::size_t> positions;
};

struct Recipe {
  std::string name;
  GroupType type;
  Congruences congruences = Congruences::None;
  std::uint32_t output_order = 0;
  std::string cqs_signature;
  FillSpec special_fill;
  std::map<std::uint64_t, FillSpec> group_fills;
  std::optional<std::size_t> special_group;
  std::optional<Point> stem_point;

  /// Throws ParseError with the line number.
  static Recipe parse(std::string_view text);
  std::string to_text() const;

  /// CQS first, then the special fill, then group fills by size; no repeats.
  std::vector<std::string> required_signatures() const;
  /// assembly_predicted_count for the recipe's type.
  BigInt predicted_count() const;
};

/// Resolves every ingredient, then assembles. Throws MissingIngredient listing
/// every signature the source cannot supply, InvalidIngredient when a design
/// does not match its signature, plus anything assemble throws.
AssemblyResult execute_recipe(const Recipe& recipe, const IngredientSource& source);

struct RecipeOutcome {
  std::optional<AssemblyResult> result;
  std::vector<std::string> missing;
  /// error text for failures other than missing ingredients
  std::string error;
};

/// Runs recipes concurrently; outcomes in input order.
std::vector<RecipeOutcome> execute_recipes(std::span<const Recipe> recipes, const IngredientSource& source);

/// The recipes compiled into the library, by asset name.
std::vector<std::pair<std::string, Recipe>> shipped_recipes();

}  // namespace qpack
