#pragma once

// Seed-deterministic synthetic epilepsy cohort with a planted pattern.
//
// Every planted patient gets the pattern inside the 90-day at-risk window
// before their first seizure and never inside the 90-180 day control
// window; no other patient's at-risk window contains it. The pattern's
// discriminative support under the seizure/switch query is therefore
// exactly the plant count.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathmine/ingest.hpp"
#include "pathmine/knowledge_base.hpp"
#include "pathmine/model.hpp"

namespace pathmine {

/// `K:ATC/GROUP/FLAG,ATC/GROUP/FLAG,...`, e.g.
/// `25:N03AG01/438/1,N03AG01/438/1,N03AX14/1023/0,N03AX14/1023/0`.
struct PlantSpec {
  std::size_t count = 0;
  std::vector<Item> pattern;  // (atc, group, generic) items
};

/// Throws Error(kInvalidPlantSpec).
PlantSpec parse_plant_spec(std::string_view text);
std::string to_string(const PlantSpec& spec);

/// The generic valproate 438 -> brand levetiracetam 1023 switch sequence.
PlantSpec default_plant(std::size_t count);

struct SynthOptions {
  std::size_t patients = 1000;
  std::optional<PlantSpec> plant;
  std::uint64_t seed = 1;
  /// Mean deliveries per window for patients with an index event.
  double events_per_window = 6.0;
  double seizure_fraction = 0.9;
  double polytherapy_fraction = 0.1;
  /// Probability that a window contains one generic/brand switch.
  double switch_probability = 0.25;
};

struct SynthCohort {
  RawDatabase raw;
  KnowledgeBase kb;
  std::vector<std::string> planted_patients;  // sorted
};

/// Throws Error(kInvalidPlantSpec) when the plant count exceeds the cohort.
SynthCohort generate_cohort(const SynthOptions& options);

/// deliveries.csv, diseases.csv, kb_attributes.csv, taxonomy.csv,
/// study.pmq and planted_patients.txt under `dir` (created if needed).
void write_cohort(const SynthCohort& cohort, const std::filesystem::path& dir,
                  int study_min_support = 20);

}  // namespace pathmine
