#pragma once

// JSON Lines serialization of mined patterns and the run summary.
//
// One object per pattern:
//   {"items":[["N03AG01","438",1],...],"length":4,"positive_support":31,
//    "discriminative_support":["P00017",...],"embeddings":{"P00017":[[2,3,5,6]]}}
// "discriminative_support" is null for non-discriminative tasks and
// "embeddings" is omitted in EmbeddingMode::kNone.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>

#include "pathmine/miner.hpp"

namespace pathmine {

std::string to_json_line(const PatternTuple& tuple, bool with_embeddings = true);

/// Writes one line per pattern; returns the number of lines written.
std::size_t write_jsonl(std::ostream& out, const MiningResult& result, bool with_embeddings = true);

struct RunReport {
  std::size_t patients = 0;
  std::size_t with_index_event = 0;
  std::size_t delivery_facts = 0;
  std::size_t disease_facts = 0;
  std::size_t kb_codes = 0;
  std::size_t taxonomy_edges = 0;
  std::size_t skipped_unknown_codes = 0;
  std::size_t positive_events = 0;
  std::size_t negative_events = 0;
  std::size_t pattern_count = 0;
  std::size_t nodes_explored = 0;
  double wall_seconds = 0.0;
  bool complete = true;
  std::map<std::string, std::string> configuration;
};

/// Pretty-printed JSON document.
std::string to_json(const RunReport& report);

}  // namespace pathmine
