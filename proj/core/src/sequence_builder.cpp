#include "pathmine/sequence_builder.hpp"

#include <map>
#include <string_view>

#include "pathmine/error.hpp"

namespace pathmine {

std::optional<std::int64_t> find_index_event(std::span<const DiseaseFact> patient_diseases,
                                             const IndexEventRule& rule,
                                             const Taxonomy& taxonomy) {
  std::optional<std::int64_t> first;
  for (const auto& d : patient_diseases) {
    if (first && d.day >= *first) continue;
    if (taxonomy.descends_from_any(d.icd, rule.diagnosis_ancestors)) first = d.day;
  }
  return first;
}

std::optional<Item> map_delivery(const DeliveryFact& delivery, const MiningTask& task,
                                 const KnowledgeBase& kb, const BuildOptions& options,
                                 BuildStats* stats) {
  if (kb.find(delivery.cip) == nullptr) {
    if (options.unknown_code == UnknownCodePolicy::kSkip) {
      if (stats) ++stats->skipped_unknown_codes;
      return std::nullopt;
    }
    throw Error(Errc::kUnknownCode, "delivery code " + delivery.cip + " of patient " +
                                        delivery.patient + " at day " +
                                        std::to_string(delivery.day) +
                                        " is absent from the attribute table");
  }
  return kb.classify(delivery.cip, task.class_filter, task.schema);
}

std::pair<EventSequence, EventSequence> build_case_pair(
    const std::string& patient, std::span<const DeliveryFact> patient_deliveries,
    std::int64_t index_day, const MiningTask& task, const KnowledgeBase& kb,
    const BuildOptions& options, BuildStats* stats) {
  std::vector<Event> positive;
  std::vector<Event> negative;
  for (const auto& d : patient_deliveries) {
    const bool in_pos = task.positive.contains(d.day, index_day);
    const bool in_neg = task.negative && task.negative->contains(d.day, index_day);
    if (!in_pos && !in_neg) {
      // Unknown codes are reported even outside the windows.
      if (kb.find(d.cip) == nullptr) map_delivery(d, task, kb, options, stats);
      continue;
    }
    auto item = map_delivery(d, task, kb, options, stats);
    if (!item) continue;
    if (in_pos) {
      positive.push_back(Event{d.day, *item});
    } else if (in_neg) {
      negative.push_back(Event{d.day, std::move(*item)});
    }
  }
  if (stats) {
    stats->positive_events += positive.size();
    stats->negative_events += negative.size();
  }
  return {EventSequence({patient, Polarity::kPositive}, std::move(positive)),
          EventSequence({patient, Polarity::kNegative}, std::move(negative))};
}

CaseCrossoverDatabase build_database(const RawDatabase& raw, const MiningTask& task,
                                     const KnowledgeBase& kb, const BuildOptions& options,
                                     BuildStats* stats) {
  struct Facts {
    std::vector<DeliveryFact> deliveries;
    std::vector<DiseaseFact> diseases;
  };
  std::map<std::string_view, Facts> by_patient;
  for (const auto& d : raw.deliveries) by_patient[d.patient].deliveries.push_back(d);
  for (const auto& d : raw.diseases) by_patient[d.patient].diseases.push_back(d);

  BuildStats local;
  CaseCrossoverDatabase db;
  db.schema = task.schema;
  db.has_negative = task.negative.has_value();
  local.patients = by_patient.size();
  for (const auto& [patient, facts] : by_patient) {
    const auto index = find_index_event(facts.diseases, task.index_event, kb.taxonomy());
    if (!index) continue;
    ++local.with_index_event;
    auto [pos, neg] = build_case_pair(std::string(patient), facts.deliveries, *index, task, kb,
                                      options, &local);
    db.pairs.push_back(CasePair{std::string(patient), *index, std::move(pos), std::move(neg)});
  }
  if (stats) *stats = local;
  return db;
}

}  // namespace pathmine
