#pragma once

// Background knowledge: delivery-code attributes (code -> therapeutic class,
// speciality group, generic flag) and code taxonomies with ancestor queries.

#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pathmine/model.hpp"

namespace pathmine {

/// Upper-cases and trims a code so that `n03ag01` and `N03AG01` coincide.
std::string normalize_code(std::string_view code);

struct CodeAttributes {
  std::string delivery_code;
  std::string therapeutic_class;
  std::string speciality_group;
  int generic_flag = 0;  // 1 generic, 0 brand-name
  /// Opaque extra columns, aligned with KnowledgeBase::extra_columns().
  std::vector<std::string> extras;

  friend bool operator==(const CodeAttributes&, const CodeAttributes&) = default;
};

using TaxonomyEdge = std::pair<std::string, std::string>;  // (child, parent)

/// is_a forest/DAG. Ancestor sets are precomputed at construction, so a
/// Taxonomy is immutable and safe for concurrent reads.
class Taxonomy {
 public:
  Taxonomy() = default;
  /// Throws Error(kCycle) naming one cycle when the edges are cyclic.
  explicit Taxonomy(std::vector<TaxonomyEdge> edges);
  Taxonomy(std::initializer_list<TaxonomyEdge> edges)
      : Taxonomy(std::vector<TaxonomyEdge>(edges)) {}

  /// Reflexive-transitive ancestors; an unknown code yields {code}.
  std::set<std::string> ancestors(const std::string& code) const;

  /// True iff some ancestor of `code` (itself included) is in `targets`.
  bool descends_from_any(const std::string& code,
                         const std::set<std::string>& targets) const;

  const std::vector<TaxonomyEdge>& edges() const noexcept { return edges_; }

 private:
  std::vector<TaxonomyEdge> edges_;
  std::map<std::string, std::set<std::string>> closure_;
};

inline std::set<std::string> ancestors(const std::string& code, const Taxonomy& taxonomy) {
  return taxonomy.ancestors(code);
}

class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  /// Identical repeated rows collapse; conflicting rows for one code throw
  /// Error(kDuplicateCode).
  KnowledgeBase(std::vector<CodeAttributes> attributes, Taxonomy taxonomy,
                std::vector<std::string> extra_columns = {});

  const CodeAttributes* find(const std::string& delivery_code) const;
  /// Throws Error(kUnknownCode).
  const CodeAttributes& at(const std::string& delivery_code) const;

  const Taxonomy& taxonomy() const noexcept { return taxonomy_; }
  const std::vector<std::string>& extra_columns() const noexcept { return extra_columns_; }
  const std::map<std::string, CodeAttributes>& attributes() const noexcept { return table_; }

  /// `cip`, `atc`, `group`, `generic`, then the extra columns.
  std::vector<std::string> attribute_names() const;
  bool has_attribute(const std::string& name) const;
  /// Only `generic` is integer-typed.
  static bool is_integer_attribute(const std::string& name) { return name == "generic"; }

  /// Value of a named attribute for one row; std::nullopt if the name is unknown.
  std::optional<AttributeValue> attribute(const CodeAttributes& row,
                                          const std::string& name) const;

  /// Reified item projected onto `schema` when the code's therapeutic class
  /// is in `class_filter`, std::nullopt otherwise. Unknown codes throw
  /// Error(kUnknownCode).
  std::optional<Item> classify(const std::string& delivery_code,
                               const std::set<std::string>& class_filter,
                               const ItemSchema& schema) const;

 private:
  std::map<std::string, CodeAttributes> table_;
  Taxonomy taxonomy_;
  std::vector<std::string> extra_columns_;
};

/// The (therapeutic_class, speciality_group, generic_flag) schema.
const ItemSchema& default_item_schema();

std::optional<Item> classify_delivery(const std::string& delivery_code,
                                      const KnowledgeBase& kb,
                                      const std::set<std::string>& class_filter);

}  // namespace pathmine
