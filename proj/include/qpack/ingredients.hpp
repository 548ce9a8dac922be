#pragma once

// Where constructions get the designs they are built from. Signatures look
// like MPQS:11, HPQS:17:5 (order, hole size) or CQS:24.24.24:12.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpack/core.hpp"

namespace qpack {

class IngredientSource {
 public:
  virtual ~IngredientSource() = default;
  virtual std::optional<PackingDesign> find_packing(const std::string& signature) const = 0;
  virtual std::optional<CandelabraSystem> find_cqs(const std::string& signature) const = 0;
};

struct ParsedSignature {
  enum class Kind { MPQS, HPQS, CQS };
  Kind kind = Kind::MPQS;
  std::uint32_t order = 0;
  std::uint32_t hole = 0;
  /// CQS only: "24.24.24:12"
  std::string type;
};

/// Throws InvalidIngredient for malformed signatures.
ParsedSignature parse_signature(std::string_view signature);

/// "HPQS:17:5" -> "HPQS_17_5.pqs"; used for catalog and embedded files.
std::string signature_file_name(std::string_view signature);

/// The signature a design would be stored under: MPQS:n for a hole-free
/// design, HPQS:n:h for a holey one, CQS:<type> for a candelabra system.
std::string signature_of(const PackingDesign& d);
std::string signature_of(const CandelabraSystem& c);

/// Verifies that `d` is what `signature` promises: a packing of the right
/// order meeting the Johnson bound (MPQS) or the holey target with the hole
/// on the last points (HPQS). Returns a list of failures; empty means fine.
std::vector<std::string> check_against_signature(const PackingDesign& d,
                                                 const std::string& signature);
std::vector<std::string> check_against_signature(const CandelabraSystem& c,
                                                 const std::string& signature);

/// Designs the library can produce without any files: orders up to 8 (by
/// exact search),
/// the embedded search-derived ingredients, the direct constructions and the
/// holey designs obtained from them by dropping their subdesign part.
class BuiltinIngredients : public IngredientSource {
 public:
  std::optional<PackingDesign> find_packing(const std::string& signature) const override;
  std::optional<CandelabraSystem> find_cqs(const std::string& signature) const override;
};

/// A source with nothing in it except what `inner` provides for the
/// signatures not listed in `withheld`. Used to exercise missing-ingredient
/// paths.
class WithholdingSource : public IngredientSource {
 public:
  WithholdingSource(const IngredientSource& inner, std::vector<std::string> withheld)
      : inner_(inner), withheld_(std::move(withheld)) {}
  std::optional<PackingDesign> find_packing(const std::string& signature) const override;
  std::optional<CandelabraSystem> find_cqs(const std::string& signature) const override;

 private:
  const IngredientSource& inner_;
  std::vector<std::string> withheld_;
};

/// Asks each source in turn; the first hit wins.
class ChainedSource : public IngredientSource {
 public:
  explicit ChainedSource(std::vector<const IngredientSource*> sources)
      : sources_(std::move(sources)) {}
  std::optional<PackingDesign> find_packing(const std::string& signature) const override;
  std::optional<CandelabraSystem> find_cqs(const std::string& signature) const override;

 private:
  std::vector<const IngredientSource*> sources_;
};

/// Process-wide built-in source.
const BuiltinIngredients& builtin_ingredients();

}  // namespace qpack
