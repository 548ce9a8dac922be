#pragma once

// Plain-text design files.
//
//   kind MPQS|PQS|HPQS|CQS
//   n <points>
//   hole <p> <p> ...            optional
//   groups <p> <p>;<p> <p> ...  CQS only
//   stem <p> ...                CQS only, may be empty
//   source=...                  optional provenance line
//   blocks <count>
//   <a> <b> <c> <d>             one block per line, sorted, lines sorted
//
// Canonical files round-trip byte for byte.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "qpack/core.hpp"

namespace qpack {

struct DesignFile {
  std::variant<PackingDesign, CandelabraSystem> design;
  std::optional<std::string> provenance;

  bool is_cqs() const noexcept { return std::holds_alternative<CandelabraSystem>(design); }
  const PackingDesign& packing() const { return std::get<PackingDesign>(design); }
  const CandelabraSystem& cqs() const { return std::get<CandelabraSystem>(design); }
};

/// Throws ParseError carrying the 1-based line of the first problem.
DesignFile parse_design(std::string_view text);

std::string serialize_design(const PackingDesign& d,
                             const std::optional<std::string>& provenance = std::nullopt);
std::string serialize_design(const CandelabraSystem& c,
                             const std::optional<std::string>& provenance = std::nullopt);
std::string serialize_design(const DesignFile& f);

/// Throws Io when the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it into place.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace qpack
