#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "pathmine/error.hpp"
#include "pathmine/query.hpp"
#include "pathmine/sequence_builder.hpp"

namespace pathmine {
namespace {

Taxonomy icd_taxonomy() {
  return Taxonomy({{"G403", "G40"}, {"G409", "G40"}, {"G411", "G41"}, {"I10X", "I10"}});
}

KnowledgeBase study_kb() {
  return KnowledgeBase({{"VG", "N03AG01", "438", 1, {}},
                        {"VB", "N03AG01", "438", 0, {}},
                        {"LB", "N03AX14", "1023", 0, {}},
                        {"PA", "N02BE01", "900", 1, {}}},
                       Taxonomy({{"G403", "G40"}, {"G409", "G40"}, {"G411", "G41"},
                                 {"N03AG01", "N03AG"}, {"N03AX14", "N03AX"}}));
}

MiningTask study_task() { return compile(parse_query(seizure_switch_query(1)), study_kb()); }

IndexEventRule seizure_rule() { return IndexEventRule{{"G40", "G41"}}; }

TEST(FindIndexEvent, FirstSeizureDay) {
  const std::vector<DiseaseFact> d{{"p1", 50, "G403"}, {"p1", 120, "G409"}};
  EXPECT_EQ(find_index_event(d, seizure_rule(), icd_taxonomy()), 50);
}

TEST(FindIndexEvent, NoQualifyingDiagnosis) {
  const std::vector<DiseaseFact> d{{"p1", 10, "I10X"}};
  EXPECT_EQ(find_index_event(d, seizure_rule(), icd_taxonomy()), std::nullopt);
  EXPECT_EQ(find_index_event({}, seizure_rule(), icd_taxonomy()), std::nullopt);
}

TEST(FindIndexEvent, SameDayTiesAndAncestorItself) {
  const std::vector<DiseaseFact> d{{"p1", 30, "G411"}, {"p1", 30, "G403"}, {"p1", 80, "G41"}};
  EXPECT_EQ(find_index_event(d, seizure_rule(), icd_taxonomy()), 30);
  const std::vector<DiseaseFact> direct{{"p1", 80, "G41"}};
  EXPECT_EQ(find_index_event(direct, seizure_rule(), icd_taxonomy()), 80);
}

TEST(FindIndexEvent, InvariantUnderPermutation) {
  std::mt19937 rng(5);
  const std::vector<std::string> codes{"G403", "G409", "G411", "I10X", "Z00"};
  for (int round = 0; round < 100; ++round) {
    std::vector<DiseaseFact> d;
    std::optional<std::int64_t> want;
    for (int k = static_cast<int>(rng() % 6); k > 0; --k) {
      DiseaseFact f{"p", static_cast<std::int64_t>(rng() % 100), codes[rng() % codes.size()]};
      if (f.icd[0] == 'G' && (!want || f.day < *want)) want = f.day;
      d.push_back(f);
    }
    for (int perm = 0; perm < 3; ++perm) {
      std::shuffle(d.begin(), d.end(), rng);
      EXPECT_EQ(find_index_event(d, seizure_rule(), icd_taxonomy()), want);
    }
  }
}

TEST(BuildCasePair, ExactBoundaryDaysAreInNeitherWindow) {
  const auto task = study_task();
  const std::vector<DeliveryFact> d{{"p", 10, "VG", 1}, {"p", 100, "VG", 1}, {"p", 190, "VG", 1}};
  const auto [pos, neg] = build_case_pair("p", d, 190, task, study_kb());
  EXPECT_TRUE(pos.empty());
  EXPECT_TRUE(neg.empty());
}

TEST(BuildCasePair, GenericDeliveryDayBeforeIndex) {
  const auto task = study_task();
  const std::vector<DeliveryFact> d{{"p", 189, "VG", 1}};
  const auto [pos, neg] = build_case_pair("p", d, 190, task, study_kb());
  ASSERT_EQ(pos.size(), 1u);
  EXPECT_EQ(pos.events()[0].item,
            (Item{std::string("N03AG01"), std::string("438"), std::int64_t{1}}));
  EXPECT_TRUE(neg.empty());
}

TEST(BuildCasePair, NonAntiepilepticExcluded) {
  const auto task = study_task();
  const std::vector<DeliveryFact> d{{"p", 150, "PA", 1}, {"p", 60, "PA", 1}};
  const auto [pos, neg] = build_case_pair("p", d, 190, task, study_kb());
  EXPECT_TRUE(pos.empty());
  EXPECT_TRUE(neg.empty());
}

TEST(BuildCasePair, PartitionsByWindow) {
  const auto task = study_task();
  const std::vector<DeliveryFact> d{{"p", 11, "VB", 1}, {"p", 99, "LB", 1}, {"p", 101, "VG", 1},
                                    {"p", 150, "LB", 2}, {"p", 250, "LB", 1}};
  BuildStats stats;
  const auto [pos, neg] = build_case_pair("p", d, 190, task, study_kb(), {}, &stats);
  ASSERT_EQ(pos.size(), 2u);
  EXPECT_EQ(pos.events()[0].day, 101);
  EXPECT_EQ(pos.events()[1].day, 150);
  ASSERT_EQ(neg.size(), 2u);
  EXPECT_EQ(neg.events()[0].day, 11);
  EXPECT_EQ(stats.positive_events, 2u);
  EXPECT_EQ(stats.negative_events, 2u);
}

TEST(BuildCasePair, UnknownCodePolicies) {
  const auto task = study_task();
  const std::vector<DeliveryFact> d{{"p", 150, "XX", 1}, {"p", 151, "VG", 1}};
  try {
    build_case_pair("p", d, 190, task, study_kb());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kUnknownCode);
  }
  BuildStats stats;
  const auto [pos, neg] =
      build_case_pair("p", d, 190, task, study_kb(), {UnknownCodePolicy::kSkip}, &stats);
  EXPECT_EQ(pos.size(), 1u);
  EXPECT_EQ(stats.skipped_unknown_codes, 1u);
}

TEST(BuildDatabase, OnlyPatientsWithIndexEvent) {
  RawDatabase raw;
  raw.diseases = {{"p1", 200, "G403"}, {"p2", 0, "G411"}, {"p3", 100, "I10X"}};
  raw.deliveries = {{"p1", 150, "VG", 1}, {"p3", 50, "VG", 1}};
  BuildStats stats;
  const auto db = build_database(raw, study_task(), study_kb(), {}, &stats);
  ASSERT_EQ(db.pairs.size(), 2u);
  EXPECT_TRUE(db.has_negative);
  EXPECT_EQ(db.pairs[0].patient, "p1");
  EXPECT_EQ(db.pairs[0].positive.size(), 1u);
  EXPECT_EQ(db.pairs[1].patient, "p2");
  EXPECT_EQ(db.pairs[1].index_day, 0);
  EXPECT_TRUE(db.pairs[1].positive.empty());
  EXPECT_TRUE(db.pairs[1].negative.empty());
  EXPECT_EQ(stats.patients, 3u);
  EXPECT_EQ(stats.with_index_event, 2u);
}

TEST(BuildDatabase, WindowsAreDisjointAndExact) {
  std::mt19937 rng(9);
  const std::vector<std::string> cips{"VG", "VB", "LB", "PA"};
  const auto task = study_task();
  const auto kb = study_kb();
  for (int round = 0; round < 50; ++round) {
    RawDatabase raw;
    for (int p = 0; p < 5; ++p) {
      const std::string id = "p" + std::to_string(p);
      raw.diseases.push_back({id, static_cast<std::int64_t>(100 + rng() % 200), "G403"});
      for (int k = 0; k < 15; ++k) {
        raw.deliveries.push_back(
            {id, static_cast<std::int64_t>(rng() % 320), cips[rng() % cips.size()], 1});
      }
    }
    const auto db = build_database(raw, task, kb);
    for (const auto& pair : db.pairs) {
      std::size_t want_pos = 0, want_neg = 0;
      for (const auto& d : raw.deliveries) {
        if (d.patient != pair.patient || d.cip == "PA") continue;
        const auto rel = d.day - pair.index_day;
        if (rel > -90 && rel < 0) ++want_pos;
        if (rel > -180 && rel < -90) ++want_neg;
      }
      EXPECT_EQ(pair.positive.size(), want_pos);
      EXPECT_EQ(pair.negative.size(), want_neg);
      for (const auto& e : pair.positive.events()) {
        EXPECT_TRUE(e.day > pair.index_day - 90 && e.day < pair.index_day);
      }
      for (const auto& e : pair.negative.events()) {
        EXPECT_TRUE(e.day > pair.index_day - 180 && e.day < pair.index_day - 90);
      }
    }
  }
}

}  // namespace
}  // namespace pathmine
