#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pathmine {

enum class Errc {
  // ingest
  kParseError,
  kNegativeDay,
  kIo,
  // knowledge base
  kDuplicateCode,
  kCycle,
  kUnknownCode,
  // query language
  kSyntax,
  kDuplicateClause,
  kMissingClause,
  kUnknownAttribute,
  kEmptyClassFilter,
  kInvalidWindow,
  kTypeMismatch,
  // mining
  kMissingNegativeWindow,
  kTooLarge,
  // synthetic cohort
  kInvalidPlantSpec,
};

std::string_view to_string(Errc code) noexcept;

/// Base of every error raised by the library. The code identifies the
/// failure class; what() carries a human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Query-language failure with a 1-based source position (0 when the
/// error is not tied to a location, e.g. a missing clause).
class QueryError : public Error {
 public:
  QueryError(Errc code, const std::string& message, std::size_t line = 0,
             std::size_t column = 0);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace pathmine
