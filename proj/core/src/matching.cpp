#include "pathmine/matching.hpp"

namespace pathmine {

namespace {
bool item_matches(const Event& e, const Item& item) { return e.item == item; }
}  // namespace

bool supports(const Pattern& pattern, const EventSequence& sequence) {
  std::size_t k = 0;
  for (const auto& e : sequence.events()) {
    if (k == pattern.size()) break;
    if (item_matches(e, pattern.items[k])) ++k;
  }
  return k == pattern.size();
}

std::vector<Embedding> find_embeddings(const Pattern& pattern,
                                       const EventSequence& sequence,
                                       std::size_t limit) {
  const auto items = sequence.items();
  return find_embeddings(std::span<const Item>(pattern.items),
                         std::span<const Item>(items), limit);
}

}  // namespace pathmine
