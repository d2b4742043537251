#pragma once

// Complete constraint-based sequential pattern miner over a case-crossover
// database.
//
// Depth-first prefix extension with per-sequence leftmost-frontier
// projection. Positive support is anti-monotone and bounds both the
// min_support and discriminative constraints; the switch count never
// decreases under extension. Both are used to cut subtrees. Discriminative
// support is evaluated lazily, only for nodes that pass every other test.

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pathmine/matching.hpp"
#include "pathmine/model.hpp"
#include "pathmine/sequence_builder.hpp"
#include "pathmine/task.hpp"

namespace pathmine {

enum class EmbeddingMode { kNone, kWitness, kAll };

struct MiningOptions {
  /// Defaults to the longest positive sequence.
  std::optional<std::size_t> max_length;
  EmbeddingMode embeddings = EmbeddingMode::kAll;
  /// Per-sequence cap in EmbeddingMode::kAll.
  std::size_t embedding_limit = kUnlimited;
  /// Worker count; 1 runs everything on the calling thread.
  unsigned threads = 1;
  /// When false, no subtree is ever cut: every item extends every node up
  /// to max_length. Only useful for validation on tiny inputs.
  bool pruning = true;
  std::optional<std::chrono::milliseconds> time_limit;
  std::optional<std::size_t> node_limit;
};

struct MiningResult {
  /// Canonically sorted (length, then item order).
  std::vector<PatternTuple> patterns;
  /// False when a resource limit stopped the search; `patterns` is then a
  /// sound but possibly incomplete subset.
  bool complete = true;
  std::size_t nodes_explored = 0;
};

/// Throws Error(kMissingNegativeWindow) when the task is discriminative
/// but the database was built without negative windows.
MiningResult mine(const MiningTask& task, const CaseCrossoverDatabase& database,
                  const MiningOptions& options = {});

/// Patients whose positive sequence supports `pattern`, in database order.
std::vector<std::string> positive_support(const Pattern& pattern,
                                          const CaseCrossoverDatabase& database);

/// Patients whose positive sequence supports `pattern` and whose negative
/// sequence does not. Throws Error(kMissingNegativeWindow).
std::vector<std::string> discriminative_support(const Pattern& pattern,
                                                const CaseCrossoverDatabase& database);

/// Adjacent positions whose value at `attribute` differs.
std::size_t count_switches(const Pattern& pattern, std::size_t attribute);

/// Summary of one search node as seen by the constraint checker. The
/// per-constraint vectors are indexed like MiningTask::constraints and only
/// read at the positions of the matching constraint kind.
struct SearchNode {
  std::size_t length = 0;
  std::size_t positive_support = 0;
  std::vector<std::size_t> switch_counts;
  std::vector<bool> contains_satisfied;
};

enum class NodeVerdict { kEmit, kExtendOnly, kPrune };

/// kPrune when no extension can satisfy the task, kEmit when the node
/// satisfies every constraint, kExtendOnly otherwise. `discriminative_count`
/// is only called once every cheaper test has passed.
NodeVerdict check_constraints(const SearchNode& node, const MiningTask& task,
                              const std::function<std::size_t()>& discriminative_count = {});

}  // namespace pathmine
