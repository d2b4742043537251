#include "pathmine/task.hpp"

#include <algorithm>

namespace pathmine {

bool WindowSpec::contains(std::int64_t day, std::int64_t index_day) const noexcept {
  const std::int64_t lo = index_day + lower_offset;
  const std::int64_t hi = index_day + upper_offset;
  const bool above = lower_inclusive ? day >= lo : day > lo;
  const bool below = upper_inclusive ? day <= hi : day < hi;
  return above && below;
}

std::string_view to_string(Comparator c) noexcept {
  switch (c) {
    case Comparator::kEq: return "==";
    case Comparator::kLe: return "<=";
    case Comparator::kGe: return ">=";
  }
  return "?";
}

bool compare(std::size_t lhs, Comparator c, std::size_t rhs) noexcept {
  switch (c) {
    case Comparator::kEq: return lhs == rhs;
    case Comparator::kLe: return lhs <= rhs;
    case Comparator::kGe: return lhs >= rhs;
  }
  return false;
}

EvaluationClass evaluation_class_of(const ConstraintKind& kind) noexcept {
  struct Visitor {
    EvaluationClass operator()(const MinSupportConstraint&) const {
      return EvaluationClass::kPrunableBound;
    }
    EvaluationClass operator()(const DiscriminativeConstraint&) const {
      return EvaluationClass::kOutputFilter;
    }
    EvaluationClass operator()(const ContainsValueConstraint&) const {
      return EvaluationClass::kMonotone;
    }
    EvaluationClass operator()(const SwitchCountConstraint&) const {
      return EvaluationClass::kOutputFilter;
    }
  };
  return std::visit(Visitor{}, kind);
}

Constraint make_constraint(ConstraintKind kind) {
  const auto evaluation = evaluation_class_of(kind);
  return Constraint{std::move(kind), evaluation};
}

std::size_t MiningTask::min_support() const noexcept {
  std::size_t threshold = 1;
  for (const auto& c : constraints) {
    if (const auto* m = std::get_if<MinSupportConstraint>(&c.kind)) {
      threshold = std::max(threshold, m->threshold);
    }
  }
  return threshold;
}

const DiscriminativeConstraint* MiningTask::discriminative() const noexcept {
  for (const auto& c : constraints) {
    if (const auto* d = std::get_if<DiscriminativeConstraint>(&c.kind)) return d;
  }
  return nullptr;
}

}  // namespace pathmine
