#pragma once

// Core domain types: reified items, timestamped event sequences, patterns,
// embeddings and the mined pattern tuple <p, T_p, E_p>.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pathmine {

/// One attribute of a reified item. Integer-typed attributes (the generic
/// flag) and string-typed ones (codes, speciality groups) never compare
/// equal to each other.
using AttributeValue = std::variant<std::int64_t, std::string>;

std::string to_string(const AttributeValue& value);

/// Reified event: an ordered tuple of attribute values. The attribute
/// names live in the owning task's ItemSchema.
struct Item {
  std::vector<AttributeValue> values;

  Item() = default;
  explicit Item(std::vector<AttributeValue> v);
  Item(std::initializer_list<AttributeValue> v);

  std::size_t size() const noexcept { return values.size(); }
  const AttributeValue& operator[](std::size_t i) const { return values[i]; }

  friend bool operator==(const Item&, const Item&) = default;
  friend auto operator<=>(const Item&, const Item&) = default;
};

std::string to_string(const Item& item);

struct ItemSchema {
  std::vector<std::string> names;

  std::optional<std::size_t> index_of(const std::string& name) const;
  friend bool operator==(const ItemSchema&, const ItemSchema&) = default;
};

enum class Polarity : std::uint8_t { kPositive, kNegative };

std::string_view to_string(Polarity p) noexcept;

struct SequenceId {
  std::string patient;
  Polarity polarity = Polarity::kPositive;

  friend bool operator==(const SequenceId&, const SequenceId&) = default;
  friend auto operator<=>(const SequenceId&, const SequenceId&) = default;
};

struct Event {
  std::int64_t day = 0;
  Item item;

  friend bool operator==(const Event&, const Event&) = default;
  friend auto operator<=>(const Event&, const Event&) = default;
};

/// Events of one patient in one window, kept sorted by (day, item).
/// Identical (day, item) events stay as distinct positions.
class EventSequence {
 public:
  EventSequence() = default;
  /// Sorts `events` canonically. Throws Error(kNegativeDay) on a negative
  /// timestamp and std::invalid_argument on an empty item.
  EventSequence(SequenceId id, std::vector<Event> events);

  const SequenceId& id() const noexcept { return id_; }
  const std::vector<Event>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }

  std::vector<Item> items() const;

 private:
  SequenceId id_;
  std::vector<Event> events_;
};

/// Candidate pattern. The empty pattern only appears as the search root.
struct Pattern {
  std::vector<Item> items;

  std::size_t size() const noexcept { return items.size(); }
  bool empty() const noexcept { return items.empty(); }

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

/// Canonical result order: shorter first, then lexicographic by item.
bool canonical_less(const Pattern& a, const Pattern& b);

/// Strictly increasing 1-based positions into one EventSequence.
struct Embedding {
  std::vector<std::size_t> positions;

  friend bool operator==(const Embedding&, const Embedding&) = default;
  friend auto operator<=>(const Embedding&, const Embedding&) = default;
};

struct PatternTuple {
  Pattern pattern;
  /// T_p: sequences (positive windows) with at least one embedding,
  /// ordered by patient id.
  std::vector<SequenceId> supported;
  /// Patients whose positive window supports the pattern and whose
  /// negative window does not. Set only when the task is discriminative.
  std::optional<std::vector<std::string>> discriminative;
  /// E_p restricted per the embedding mode; keys are exactly `supported`
  /// unless embeddings were not requested.
  std::map<SequenceId, std::vector<Embedding>> embeddings;

  friend bool operator==(const PatternTuple&, const PatternTuple&) = default;
};

}  // namespace pathmine
