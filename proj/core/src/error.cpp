#include "pathmine/error.hpp"

namespace pathmine {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::kParseError: return "ParseError";
    case Errc::kNegativeDay: return "NegativeDay";
    case Errc::kIo: return "IoError";
    case Errc::kDuplicateCode: return "DuplicateCode";
    case Errc::kCycle: return "CycleError";
    case Errc::kUnknownCode: return "UnknownCode";
    case Errc::kSyntax: return "SyntaxError";
    case Errc::kDuplicateClause: return "DuplicateClause";
    case Errc::kMissingClause: return "MissingClause";
    case Errc::kUnknownAttribute: return "UnknownAttribute";
    case Errc::kEmptyClassFilter: return "EmptyClassFilter";
    case Errc::kInvalidWindow: return "InvalidWindow";
    case Errc::kTypeMismatch: return "TypeMismatch";
    case Errc::kMissingNegativeWindow: return "MissingNegativeWindow";
    case Errc::kTooLarge: return "TooLarge";
    case Errc::kInvalidPlantSpec: return "InvalidPlantSpec";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

namespace {
std::string with_position(const std::string& message, std::size_t line,
                          std::size_t column) {
  if (line == 0) return message;
  return "line " + std::to_string(line) + ", column " + std::to_string(column) +
         ": " + message;
}
}  // namespace

QueryError::QueryError(Errc code, const std::string& message, std::size_t line,
                       std::size_t column)
    : Error(code, with_position(message, line, column)),
      line_(line),
      column_(column) {}

}  // namespace pathmine
