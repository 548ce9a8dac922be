#pragma once

// A directory of verified design files, one per signature, named like the
// embedded ingredients (MPQS_35.pqs, HPQS_17_5.pqs, CQS_2.2.2_2.pqs).
// Reads may run concurrently; writes are serialized and atomic.

#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "qpack/design_io.hpp"
#include "qpack/ingredients.hpp"

namespace qpack {

class Catalog : public IngredientSource {
 public:
  explicit Catalog(std::filesystem::path root);

  /// $QPACK_CATALOG, or ./qpack-catalog when unset.
  static std::filesystem::path default_root();

  const std::filesystem::path& root() const noexcept { return root_; }

  /// Verifies the design against `signature` (default: the signature the
  /// design itself implies) and stores it. Throws InvalidIngredient listing
  /// every failed check; nothing is written in that case.
  std::string add(const DesignFile& file, std::optional<std::string> signature = std::nullopt);

  /// Stored signatures, sorted.
  std::vector<std::string> list() const;
  std::optional<DesignFile> get(const std::string& signature) const;
  std::filesystem::path path_for(const std::string& signature) const;

  std::optional<PackingDesign> find_packing(const std::string& signature) const override;
  std::optional<CandelabraSystem> find_cqs(const std::string& signature) const override;

 private:
  std::filesystem::path root_;
  mutable std::shared_mutex mu_;
};

/// "HPQS_17_5.pqs" -> "HPQS:17:5"; nullopt for names that are not design files.
std::optional<std::string> signature_from_file_name(const std::string& name);

}  // namespace qpack
