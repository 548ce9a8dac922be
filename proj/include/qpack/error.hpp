#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qpack {

enum class ErrorKind {
  InvalidPoint,
  InvalidBlock,
  DuplicateBlock,
  InvalidCongruence,
  InfeasibleType,
  NotOneFactorable,
  InvalidModulus,
  MissingEntry,
  MissingIngredient,
  InvalidIngredient,
  ConstructionConflict,
  NotAPacking,
  MissingContext,
  InvalidTarget,
  AlignmentError,
  HoleViolation,
  CountingViolation,
  ParseError,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when one or more named ingredient designs cannot be resolved.
/// Carries every unsatisfied signature, not just the first.
class MissingIngredient : public Error {
 public:
  explicit MissingIngredient(std::vector<std::string> signatures);

  const std::vector<std::string>& signatures() const noexcept { return signatures_; }

 private:
  std::vector<std::string> signatures_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message);

  /// 1-based; 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace qpack
