#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "pathmine/error.hpp"
#include "pathmine/knowledge_base.hpp"

namespace pathmine {
namespace {

using Set = std::set<std::string>;

template <typename F>
Errc error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::kIo;
}

TEST(Taxonomy, OneStepEdgeIsReflexive) {
  Taxonomy t({{"G403", "G40"}});
  EXPECT_EQ(ancestors("G403", t), (Set{"G403", "G40"}));
}

TEST(Taxonomy, IsolatedCode) {
  Taxonomy t({{"G403", "G40"}});
  EXPECT_EQ(ancestors("G41", t), (Set{"G41"}));
  EXPECT_EQ(ancestors("G40", Taxonomy{}), (Set{"G40"}));
}

TEST(Taxonomy, TransitiveChain) {
  Taxonomy t({{"a", "b"}, {"b", "c"}});
  EXPECT_EQ(t.ancestors("a"), (Set{"A", "B", "C"}));
}

TEST(Taxonomy, CaseInsensitiveCodes) {
  Taxonomy t({{"g403", "G40"}});
  EXPECT_EQ(t.ancestors("G403"), (Set{"G403", "G40"}));
  EXPECT_TRUE(t.descends_from_any("g403", {"G40"}));
}

TEST(Taxonomy, CycleIsRejectedWithPath) {
  try {
    Taxonomy t({{"a", "b"}, {"b", "c"}, {"c", "a"}, {"d", "a"}});
    FAIL() << "expected cycle";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kCycle);
    EXPECT_NE(std::string(e.what()).find("->"), std::string::npos);
  }
  EXPECT_EQ(error_of([] { Taxonomy({{"x", "x"}}); }), Errc::kCycle);
}

TEST(Taxonomy, DagWithSharedAncestor) {
  Taxonomy t({{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}});
  EXPECT_EQ(t.ancestors("a"), (Set{"A", "B", "C", "D"}));
}

TEST(Taxonomy, MonotoneUnderEdgeAdditionAndClosed) {
  std::mt19937 rng(7);
  const std::vector<std::string> nodes{"A", "B", "C", "D", "E", "F"};
  for (int round = 0; round < 100; ++round) {
    // Edges only point to a later node, so every graph is acyclic.
    std::vector<TaxonomyEdge> edges;
    for (int k = 0; k < 5; ++k) {
      std::size_t i = rng() % 5, j = i + 1 + rng() % (5 - i);
      edges.emplace_back(nodes[i], nodes[j]);
    }
    Taxonomy small(edges);
    std::size_t i = rng() % 5, j = i + 1 + rng() % (5 - i);
    edges.emplace_back(nodes[i], nodes[j]);
    Taxonomy big(edges);
    for (const auto& n : nodes) {
      const auto a = small.ancestors(n);
      const auto b = big.ancestors(n);
      EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
      EXPECT_TRUE(a.contains(n));
      for (const auto& x : a) {
        const auto up = small.ancestors(x);
        EXPECT_TRUE(std::includes(a.begin(), a.end(), up.begin(), up.end()));
      }
    }
  }
}

KnowledgeBase sample_kb() {
  return KnowledgeBase({{"C1", "N03AG01", "438", 1, {}},
                        {"C2", "N02BE01", "900", 1, {}},
                        {"C3", "N03AX14", "1023", 0, {}}},
                       Taxonomy{});
}

TEST(ClassifyDelivery, GenericValproate) {
  const auto item = classify_delivery("C1", sample_kb(), {"N03AG01", "N03AX14"});
  ASSERT_TRUE(item.has_value());
  EXPECT_EQ(*item, (Item{std::string("N03AG01"), std::string("438"), std::int64_t{1}}));
}

TEST(ClassifyDelivery, FilteredOutClass) {
  EXPECT_FALSE(classify_delivery("C2", sample_kb(), {"N03AG01", "N03AX14"}).has_value());
}

TEST(ClassifyDelivery, BrandLevetiracetam) {
  const auto item = classify_delivery("c3", sample_kb(), {"n03ax14"});
  ASSERT_TRUE(item.has_value());
  EXPECT_EQ(*item, (Item{std::string("N03AX14"), std::string("1023"), std::int64_t{0}}));
}

TEST(ClassifyDelivery, UnknownCode) {
  EXPECT_EQ(error_of([] { classify_delivery("C9", sample_kb(), {"N03AG01"}); }),
            Errc::kUnknownCode);
}

TEST(KnowledgeBase, DuplicateRows) {
  EXPECT_EQ(error_of([] {
              KnowledgeBase({{"C1", "N03AG01", "438", 1, {}}, {"C1", "N03AG01", "439", 1, {}}},
                            Taxonomy{});
            }),
            Errc::kDuplicateCode);
  KnowledgeBase same({{"C1", "N03AG01", "438", 1, {}}, {"c1", "n03ag01", "438", 1, {}}},
                     Taxonomy{});
  EXPECT_EQ(same.attributes().size(), 1u);
}

TEST(KnowledgeBase, ProjectsExtraColumns) {
  KnowledgeBase kb({{"C1", "N03AG01", "438", 1, {"500mg", "30"}}}, Taxonomy{},
                   {"strength", "units"});
  EXPECT_TRUE(kb.has_attribute("strength"));
  EXPECT_FALSE(kb.has_attribute("volume"));
  const auto item = kb.classify("C1", {"N03AG01"}, ItemSchema{{"cip", "units", "generic"}});
  ASSERT_TRUE(item.has_value());
  EXPECT_EQ(*item, (Item{std::string("C1"), std::string("30"), std::int64_t{1}}));
}

}  // namespace
}  // namespace pathmine
