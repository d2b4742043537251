#pragma once

// Subsequence matching: a sequence supports a pattern iff there are
// strictly increasing positions e_1 < ... < e_n with p_k == s_{e_k}.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "pathmine/model.hpp"

namespace pathmine {

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

/// Greedy leftmost scan; never materializes embeddings.
template <typename T>
bool supports(std::span<const T> pattern, std::span<const T> sequence) {
  std::size_t k = 0;
  for (std::size_t j = 0; j < sequence.size() && k < pattern.size(); ++j) {
    if (sequence[j] == pattern[k]) ++k;
  }
  return k == pattern.size();
}

/// Every embedding in lexicographic position order, stopping after `limit`.
/// The empty pattern yields exactly one empty embedding.
template <typename T>
std::vector<Embedding> find_embeddings(std::span<const T> pattern,
                                       std::span<const T> sequence,
                                       std::size_t limit = kUnlimited) {
  std::vector<Embedding> out;
  const std::size_t n = pattern.size();
  const std::size_t m = sequence.size();
  if (limit == 0) return out;
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  if (n > m || !supports(pattern, sequence)) return out;

  // pos[k] is the 0-based index currently matched to pattern[k].
  std::vector<std::size_t> pos(n, 0);
  std::size_t k = 0;
  std::size_t next = 0;
  while (true) {
    // Pattern item k must leave room for the n-k-1 items after it.
    const std::size_t last = m - (n - k);
    bool found = false;
    for (std::size_t j = next; j <= last; ++j) {
      if (sequence[j] == pattern[k]) {
        pos[k] = j;
        found = true;
        break;
      }
    }
    if (found) {
      if (k + 1 == n) {
        Embedding e;
        e.positions.reserve(n);
        for (std::size_t p : pos) e.positions.push_back(p + 1);
        out.push_back(std::move(e));
        if (out.size() >= limit) return out;
        next = pos[k] + 1;
      } else {
        next = pos[k] + 1;
        ++k;
      }
    } else {
      if (k == 0) return out;
      --k;
      next = pos[k] + 1;
    }
  }
}

bool supports(const Pattern& pattern, const EventSequence& sequence);

std::vector<Embedding> find_embeddings(const Pattern& pattern,
                                       const EventSequence& sequence,
                                       std::size_t limit = kUnlimited);

}  // namespace pathmine
