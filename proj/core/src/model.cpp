#include "pathmine/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "pathmine/error.hpp"

namespace pathmine {

std::string to_string(const AttributeValue& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
  return std::get<std::string>(value);
}

Item::Item(std::vector<AttributeValue> v) : values(std::move(v)) {}
Item::Item(std::initializer_list<AttributeValue> v) : values(v) {}

std::string to_string(const Item& item) {
  std::string out = "(";
  for (std::size_t i = 0; i < item.size(); ++i) {
    if (i) out += ',';
    out += to_string(item[i]);
  }
  out += ')';
  return out;
}

std::optional<std::size_t> ItemSchema::index_of(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

std::string_view to_string(Polarity p) noexcept {
  return p == Polarity::kPositive ? "positive" : "negative";
}

EventSequence::EventSequence(SequenceId id, std::vector<Event> events)
    : id_(std::move(id)), events_(std::move(events)) {
  for (const auto& e : events_) {
    if (e.day < 0) {
      throw Error(Errc::kNegativeDay, "event at day " + std::to_string(e.day) +
                                          " in sequence of " + id_.patient);
    }
    if (e.item.values.empty()) throw std::invalid_argument("event with empty item");
  }
  std::stable_sort(events_.begin(), events_.end());
}

std::vector<Item> EventSequence::items() const {
  std::vector<Item> out;
  out.reserve(events_.size());
  for (const auto& e : events_) out.push_back(e.item);
  return out;
}

bool canonical_less(const Pattern& a, const Pattern& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.items < b.items;
}

}  // namespace pathmine
