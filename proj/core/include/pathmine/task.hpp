#pragma once

// A compiled mining task: how sequences are built from raw facts and which
// constraints a pattern must satisfy.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pathmine/model.hpp"

namespace pathmine {

/// Days relative to the index date. Both bounds are strict unless the
/// matching *_inclusive flag is set.
struct WindowSpec {
  Polarity polarity = Polarity::kPositive;
  std::int64_t lower_offset = -90;
  std::int64_t upper_offset = 0;
  bool lower_inclusive = false;
  bool upper_inclusive = false;

  bool contains(std::int64_t day, std::int64_t index_day) const noexcept;

  friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

/// The index event is the first diagnosis whose code descends from one of
/// `diagnosis_ancestors`.
struct IndexEventRule {
  std::set<std::string> diagnosis_ancestors;

  friend bool operator==(const IndexEventRule&, const IndexEventRule&) = default;
};

enum class EvaluationClass { kPrunableBound, kMonotone, kOutputFilter };

enum class Comparator { kEq, kLe, kGe };

std::string_view to_string(Comparator c) noexcept;
bool compare(std::size_t lhs, Comparator c, std::size_t rhs) noexcept;

/// |positive support| >= threshold. Anti-monotone.
struct MinSupportConstraint {
  std::size_t threshold = 1;
  friend bool operator==(const MinSupportConstraint&, const MinSupportConstraint&) = default;
};

/// |discriminative support| >= threshold. Not anti-monotone; relaxed by the
/// positive-support bound since discriminative support is a subset of it.
struct DiscriminativeConstraint {
  std::size_t threshold = 1;
  friend bool operator==(const DiscriminativeConstraint&, const DiscriminativeConstraint&) = default;
};

/// Some pattern item has `value` at `attribute`. Monotone.
struct ContainsValueConstraint {
  std::size_t attribute = 0;
  AttributeValue value;
  friend bool operator==(const ContainsValueConstraint&, const ContainsValueConstraint&) = default;
};

/// Number of adjacent positions whose `attribute` differs, compared to
/// `bound`. The count never decreases under extension, so `==` and `<=`
/// prune as soon as the count exceeds the bound.
struct SwitchCountConstraint {
  std::size_t attribute = 0;
  Comparator comparator = Comparator::kEq;
  std::size_t bound = 0;
  friend bool operator==(const SwitchCountConstraint&, const SwitchCountConstraint&) = default;
};

using ConstraintKind = std::variant<MinSupportConstraint, DiscriminativeConstraint,
                                    ContainsValueConstraint, SwitchCountConstraint>;

struct Constraint {
  ConstraintKind kind;
  EvaluationClass evaluation = EvaluationClass::kOutputFilter;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

EvaluationClass evaluation_class_of(const ConstraintKind& kind) noexcept;
/// Wraps `kind` with its evaluation class.
Constraint make_constraint(ConstraintKind kind);

struct MiningTask {
  IndexEventRule index_event;
  ItemSchema schema;
  /// Therapeutic classes (expanded through the taxonomy) whose deliveries
  /// become events.
  std::set<std::string> class_filter;
  WindowSpec positive{Polarity::kPositive, -90, 0};
  std::optional<WindowSpec> negative;
  std::vector<Constraint> constraints;

  /// Largest MinSupportConstraint threshold (1 when absent).
  std::size_t min_support() const noexcept;
  const DiscriminativeConstraint* discriminative() const noexcept;

  friend bool operator==(const MiningTask&, const MiningTask&) = default;
};

}  // namespace pathmine
