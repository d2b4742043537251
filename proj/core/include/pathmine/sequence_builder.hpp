#pragma once

// Derives, for every patient with an index event, a positive (at-risk) and
// a negative (control) EventSequence from raw delivery facts.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pathmine/ingest.hpp"
#include "pathmine/knowledge_base.hpp"
#include "pathmine/model.hpp"
#include "pathmine/task.hpp"

namespace pathmine {

struct CasePair {
  std::string patient;
  std::int64_t index_day = 0;
  EventSequence positive;
  EventSequence negative;
};

struct CaseCrossoverDatabase {
  ItemSchema schema;
  /// False when the task declares no negative window; negatives are empty.
  bool has_negative = false;
  /// Sorted by patient id.
  std::vector<CasePair> pairs;
};

enum class UnknownCodePolicy { kAbort, kSkip };

struct BuildOptions {
  UnknownCodePolicy unknown_code = UnknownCodePolicy::kAbort;
};

struct BuildStats {
  std::size_t patients = 0;
  std::size_t with_index_event = 0;
  std::size_t skipped_unknown_codes = 0;
  std::size_t positive_events = 0;
  std::size_t negative_events = 0;
};

/// Earliest day carrying a diagnosis that descends from the rule's codes.
std::optional<std::int64_t> find_index_event(std::span<const DiseaseFact> patient_diseases,
                                             const IndexEventRule& rule,
                                             const Taxonomy& taxonomy);

/// Maps one delivery to its reified item, or std::nullopt when filtered out.
/// Throws Error(kUnknownCode) under UnknownCodePolicy::kAbort.
std::optional<Item> map_delivery(const DeliveryFact& delivery, const MiningTask& task,
                                 const KnowledgeBase& kb, const BuildOptions& options,
                                 BuildStats* stats = nullptr);

/// Positive and negative sequences of one patient around `index_day`.
std::pair<EventSequence, EventSequence> build_case_pair(
    const std::string& patient, std::span<const DeliveryFact> patient_deliveries,
    std::int64_t index_day, const MiningTask& task, const KnowledgeBase& kb,
    const BuildOptions& options = {}, BuildStats* stats = nullptr);

/// One pair per patient having an index event, sorted by patient id.
CaseCrossoverDatabase build_database(const RawDatabase& raw, const MiningTask& task,
                                     const KnowledgeBase& kb, const BuildOptions& options = {},
                                     BuildStats* stats = nullptr);

}  // namespace pathmine
