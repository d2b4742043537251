#pragma once

// The `.pmq` mining query language.
//
//   index_event first diagnosis in {G40, G41};
//   event delivery where atc in {N03AX09, N03AG01} as (atc, group, generic);
//   window positive (index-90, index);
//   window negative (index-180, index-90);
//   min_support 20;
//   constraint discriminative;
//   constraint contains_value(generic, 1);
//   constraint switch_count(generic) == 1;
//
// Statements end with `;`, `#` starts a comment running to end of line.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pathmine/knowledge_base.hpp"
#include "pathmine/task.hpp"

namespace pathmine {

struct IndexEventClause {
  std::vector<std::string> codes;
  friend bool operator==(const IndexEventClause&, const IndexEventClause&) = default;
};

struct EventClause {
  std::vector<std::string> classes;
  std::vector<std::string> attributes;
  friend bool operator==(const EventClause&, const EventClause&) = default;
};

/// (index + lower, index + upper).
struct WindowClause {
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  friend bool operator==(const WindowClause&, const WindowClause&) = default;
};

/// A literal as written: integers keep their digits, everything else is text.
struct Literal {
  std::string text;
  bool integer = false;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct DiscriminativeClause {
  friend bool operator==(const DiscriminativeClause&, const DiscriminativeClause&) = default;
};

struct ContainsValueClause {
  std::string attribute;
  Literal value;
  friend bool operator==(const ContainsValueClause&, const ContainsValueClause&) = default;
};

struct SwitchCountClause {
  std::string attribute;
  Comparator comparator = Comparator::kEq;
  std::int64_t bound = 0;
  friend bool operator==(const SwitchCountClause&, const SwitchCountClause&) = default;
};

using ConstraintClause = std::variant<DiscriminativeClause, ContainsValueClause, SwitchCountClause>;

struct QueryAst {
  IndexEventClause index_event;
  EventClause event;
  WindowClause positive;
  std::optional<WindowClause> negative;
  std::int64_t min_support = 1;
  std::vector<ConstraintClause> constraints;

  bool discriminative() const noexcept;
  friend bool operator==(const QueryAst&, const QueryAst&) = default;
};

/// Throws QueryError with kSyntax, kDuplicateClause, kMissingClause or
/// kInvalidWindow.
QueryAst parse_query(std::string_view text);

/// Canonical text; parse_query(print_query(ast)) == ast.
std::string print_query(const QueryAst& ast);

struct CompileOptions {
  /// Match only the listed therapeutic classes, ignoring taxonomy descendants.
  bool exact_class_match = false;
  /// Include both endpoints of the negative window.
  bool closed_negative_window = false;
};

/// Resolves attributes and codes against the knowledge base. Throws
/// QueryError with kUnknownAttribute, kEmptyClassFilter or kTypeMismatch.
MiningTask compile(const QueryAst& ast, const KnowledgeBase& kb,
                   const CompileOptions& options = {});

/// Case-crossover query for antiepileptic drug switches before a first
/// seizure: 90-day at-risk window, 90-180 day control window, generic and
/// brand deliveries both present, exactly one generic/brand switch.
std::string seizure_switch_query(int min_support = 20);

}  // namespace pathmine
