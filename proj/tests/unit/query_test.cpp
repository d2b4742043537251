#include <gtest/gtest.h>

#include <random>

#include "pathmine/error.hpp"
#include "pathmine/query.hpp"

namespace pathmine {
namespace {

QueryError query_error(std::string_view text) {
  try {
    parse_query(text);
  } catch (const QueryError& e) {
    return e;
  }
  ADD_FAILURE() << "query parsed: " << text;
  return QueryError(Errc::kIo, "none");
}

const char* kMinimal =
    "index_event first diagnosis in {G40};\n"
    "event delivery where atc in {N03AG01} as (atc, generic);\n"
    "window positive (index-90, index);\n";

KnowledgeBase study_kb() {
  return KnowledgeBase(
      {{"C1", "N03AG01", "438", 1, {}}, {"C2", "N03AG01", "438", 0, {}},
       {"C3", "N03AX14", "1023", 0, {}}, {"C4", "N03AX09", "512", 1, {}},
       {"C5", "N03AX11", "777", 1, {}}, {"C6", "N03AF01", "301", 0, {}},
       {"C7", "N02BE01", "900", 1, {}}},
      Taxonomy({{"N03AG01", "N03AG"}, {"N03AG", "N03A"}, {"N03AX14", "N03AX"},
                {"N03AX09", "N03AX"}, {"N03AX11", "N03AX"}, {"N03AX", "N03A"},
                {"N03AF01", "N03AF"}, {"N03AF", "N03A"}, {"N02BE01", "N02BE"}}));
}

TEST(ParseQuery, StudyQuery) {
  const auto ast = parse_query(seizure_switch_query(20));
  EXPECT_EQ(ast.min_support, 20);
  EXPECT_EQ(ast.index_event.codes, (std::vector<std::string>{"G40", "G41"}));
  EXPECT_EQ(ast.event.classes.size(), 5u);
  EXPECT_EQ(ast.event.attributes, (std::vector<std::string>{"atc", "group", "generic"}));
  EXPECT_EQ(ast.positive, (WindowClause{-90, 0}));
  ASSERT_TRUE(ast.negative.has_value());
  EXPECT_EQ(*ast.negative, (WindowClause{-180, -90}));
  EXPECT_TRUE(ast.discriminative());
  EXPECT_EQ(ast.constraints.size(), 4u);
}

TEST(ParseQuery, SwitchCountClause) {
  const auto ast = parse_query(std::string(kMinimal) + "constraint switch_count(generic) == 1;");
  ASSERT_EQ(ast.constraints.size(), 1u);
  const auto* sc = std::get_if<SwitchCountClause>(&ast.constraints[0]);
  ASSERT_NE(sc, nullptr);
  EXPECT_EQ(sc->attribute, "generic");
  EXPECT_EQ(sc->comparator, Comparator::kEq);
  EXPECT_EQ(sc->bound, 1);
}

TEST(ParseQuery, MissingIndexEvent) {
  const auto e = query_error(
      "event delivery where atc in {N03AG01} as (atc);\nwindow positive (index-90, index);\n");
  EXPECT_EQ(e.code(), Errc::kMissingClause);
}

TEST(ParseQuery, MissingClauses) {
  EXPECT_EQ(query_error("").code(), Errc::kMissingClause);
  EXPECT_EQ(query_error("# only a comment\n").code(), Errc::kMissingClause);
  EXPECT_EQ(query_error("index_event first diagnosis in {G40};\n"
                        "window positive (index-90, index);\n")
                .code(),
            Errc::kMissingClause);
  EXPECT_EQ(query_error(std::string(kMinimal) + "constraint discriminative;").code(),
            Errc::kMissingClause);
  EXPECT_EQ(query_error(std::string(kMinimal) + "window negative (index-180, index-90);").code(),
            Errc::kMissingClause);
}

TEST(ParseQuery, DuplicateClauses) {
  auto e = query_error(std::string(kMinimal) + "min_support 2;\nmin_support 3;");
  EXPECT_EQ(e.code(), Errc::kDuplicateClause);
  EXPECT_EQ(e.line(), 5u);
  EXPECT_EQ(e.column(), 1u);
  EXPECT_EQ(query_error(std::string(kMinimal) + "window positive (index-30, index);").code(),
            Errc::kDuplicateClause);
  EXPECT_EQ(query_error(std::string(kMinimal) + "window negative (index-180, index-90);\n"
                                                "constraint discriminative;\n"
                                                "constraint discriminative;")
                .code(),
            Errc::kDuplicateClause);
}

TEST(ParseQuery, SyntaxErrorsCarryPosition) {
  auto e = query_error("index_event first diagnosis in {G40}\n"
                       "event delivery where atc in {N03AG01} as (atc);\n");
  EXPECT_EQ(e.code(), Errc::kSyntax);
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 1u);

  e = query_error(std::string(kMinimal) + "support 3;");
  EXPECT_EQ(e.code(), Errc::kSyntax);
  EXPECT_EQ(e.line(), 4u);

  EXPECT_EQ(query_error(std::string(kMinimal) + "constraint frequent;").code(), Errc::kSyntax);
  EXPECT_EQ(query_error(std::string(kMinimal) + "constraint switch_count(generic) != 1;").code(),
            Errc::kSyntax);
  EXPECT_EQ(query_error(std::string(kMinimal) + "min_support 0;").code(), Errc::kSyntax);
  EXPECT_EQ(query_error(std::string(kMinimal) + "min_support 2").code(), Errc::kSyntax);
  EXPECT_EQ(query_error("Index_event first diagnosis in {G40};").code(), Errc::kSyntax);
  EXPECT_EQ(query_error(std::string(kMinimal) + "min_support 2; @").code(), Errc::kSyntax);
}

TEST(ParseQuery, InvalidWindows) {
  const char* head =
      "index_event first diagnosis in {G40};\n"
      "event delivery where atc in {N03AG01} as (atc);\n";
  EXPECT_EQ(query_error(std::string(head) + "window positive (index, index-90);").code(),
            Errc::kInvalidWindow);
  EXPECT_EQ(query_error(std::string(head) + "window positive (index-10, index+5);").code(),
            Errc::kInvalidWindow);
  EXPECT_EQ(query_error(std::string(head) + "window positive (index-10, index-10);").code(),
            Errc::kInvalidWindow);
}

TEST(ParseQuery, CommentsAndLiterals) {
  const auto ast = parse_query(std::string(kMinimal) +
                               "# trailing comment\n"
                               "constraint contains_value(atc, n03ag01); # inline\n"
                               "constraint contains_value(group, 438);\n"
                               "constraint contains_value(group, \"4 38\");\n");
  ASSERT_EQ(ast.constraints.size(), 3u);
  EXPECT_EQ(std::get<ContainsValueClause>(ast.constraints[0]).value, (Literal{"n03ag01", false}));
  EXPECT_EQ(std::get<ContainsValueClause>(ast.constraints[1]).value, (Literal{"438", true}));
  EXPECT_EQ(std::get<ContainsValueClause>(ast.constraints[2]).value, (Literal{"4 38", false}));
}

QueryAst random_ast(std::mt19937& rng) {
  static const std::vector<std::string> codes{"G40", "G41", "N03AG01", "x.1", "3400935955838"};
  static const std::vector<std::string> attrs{"atc", "group", "generic", "cip"};
  auto pick = [&](const auto& v) { return v[rng() % v.size()]; };
  QueryAst ast;
  for (std::size_t k = 1 + rng() % 3; k > 0; --k) ast.index_event.codes.push_back(pick(codes));
  for (std::size_t k = 1 + rng() % 3; k > 0; --k) ast.event.classes.push_back(pick(codes));
  for (std::size_t k = 1 + rng() % 3; k > 0; --k) ast.event.attributes.push_back(pick(attrs));
  const std::int64_t a = -static_cast<std::int64_t>(rng() % 300) - 1;
  ast.positive = {a, a + 1 + static_cast<std::int64_t>(rng() % static_cast<unsigned>(-a))};
  ast.min_support = 1 + rng() % 50;
  if (rng() % 2) {
    ast.negative = WindowClause{-200, -100};
    ast.constraints.push_back(DiscriminativeClause{});
  }
  for (std::size_t k = rng() % 4; k > 0; --k) {
    if (rng() % 2) {
      static const std::vector<Literal> lits{{"1", true}, {"0", true}, {"N03AG01", false},
                                             {"438", false}, {"with space", false},
                                             {"quote\"d", false}};
      ast.constraints.push_back(ContainsValueClause{pick(attrs), pick(lits)});
    } else {
      ast.constraints.push_back(SwitchCountClause{pick(attrs), static_cast<Comparator>(rng() % 3),
                                                  static_cast<std::int64_t>(rng() % 4)});
    }
  }
  return ast;
}

TEST(PrintQuery, RoundTripIsStable) {
  const auto study = parse_query(seizure_switch_query(20));
  EXPECT_EQ(parse_query(print_query(study)), study);
  std::mt19937 rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto ast = random_ast(rng);
    const auto text = print_query(ast);
    const auto back = parse_query(text);
    EXPECT_EQ(back, ast) << text;
    EXPECT_EQ(print_query(back), text);
  }
}

TEST(Compile, StudyClassFilter) {
  const auto task = compile(parse_query(seizure_switch_query(20)), study_kb());
  EXPECT_EQ(task.class_filter,
            (std::set<std::string>{"N03AX09", "N03AX14", "N03AX11", "N03AG01", "N03AF01"}));
  EXPECT_EQ(task.index_event.diagnosis_ancestors, (std::set<std::string>{"G40", "G41"}));
  EXPECT_EQ(task.schema.names, (std::vector<std::string>{"atc", "group", "generic"}));
  EXPECT_EQ(task.min_support(), 20u);
  ASSERT_NE(task.discriminative(), nullptr);
  EXPECT_EQ(task.discriminative()->threshold, 20u);
  EXPECT_EQ(task.positive, (WindowSpec{Polarity::kPositive, -90, 0}));
  ASSERT_TRUE(task.negative.has_value());
  EXPECT_EQ(*task.negative, (WindowSpec{Polarity::kNegative, -180, -90}));
}

TEST(Compile, ConstraintClassification) {
  const auto task = compile(parse_query(seizure_switch_query(20)), study_kb());
  ASSERT_EQ(task.constraints.size(), 5u);
  std::size_t monotone = 0;
  for (const auto& c : task.constraints) {
    EXPECT_EQ(c.evaluation, evaluation_class_of(c.kind));
    if (std::holds_alternative<MinSupportConstraint>(c.kind)) {
      EXPECT_EQ(c.evaluation, EvaluationClass::kPrunableBound);
    } else if (std::holds_alternative<DiscriminativeConstraint>(c.kind)) {
      EXPECT_EQ(c.evaluation, EvaluationClass::kOutputFilter);
    } else if (const auto* cv = std::get_if<ContainsValueConstraint>(&c.kind)) {
      EXPECT_EQ(c.evaluation, EvaluationClass::kMonotone);
      EXPECT_EQ(cv->attribute, 2u);
      ++monotone;
    } else if (const auto* sc = std::get_if<SwitchCountConstraint>(&c.kind)) {
      EXPECT_EQ(c.evaluation, EvaluationClass::kOutputFilter);
      EXPECT_EQ(sc->attribute, 2u);
      EXPECT_EQ(sc->bound, 1u);
    }
  }
  EXPECT_EQ(monotone, 2u);
  EXPECT_EQ(std::get<ContainsValueConstraint>(task.constraints[2].kind).value,
            AttributeValue{std::int64_t{1}});
  EXPECT_EQ(std::get<ContainsValueConstraint>(task.constraints[3].kind).value,
            AttributeValue{std::int64_t{0}});
}

TEST(Compile, UnknownAttribute) {
  auto code_of = [](const std::string& text) {
    try {
      compile(parse_query(text), study_kb());
    } catch (const QueryError& e) {
      return e.code();
    }
    return Errc::kIo;
  };
  EXPECT_EQ(code_of(std::string(kMinimal) + "constraint switch_count(group) == 1;"),
            Errc::kUnknownAttribute);
  EXPECT_EQ(code_of("index_event first diagnosis in {G40};\n"
                    "event delivery where atc in {N03AG01} as (atc, strength);\n"
                    "window positive (index-90, index);"),
            Errc::kUnknownAttribute);
  EXPECT_EQ(code_of(std::string(kMinimal) + "constraint contains_value(generic, yes);"),
            Errc::kTypeMismatch);
  EXPECT_EQ(code_of("index_event first diagnosis in {G40};\n"
                    "event delivery where atc in {N05BA01} as (atc);\n"
                    "window positive (index-90, index);"),
            Errc::kEmptyClassFilter);
}

TEST(Compile, TaxonomyExpansionAndExactMode) {
  const auto ast = parse_query(
      "index_event first diagnosis in {g40};\n"
      "event delivery where atc in {N03AX} as (atc);\n"
      "window positive (index-90, index);");
  const auto expanded = compile(ast, study_kb());
  EXPECT_EQ(expanded.class_filter,
            (std::set<std::string>{"N03AX", "N03AX09", "N03AX11", "N03AX14"}));
  CompileOptions exact;
  exact.exact_class_match = true;
  try {
    compile(ast, study_kb(), exact);
    FAIL() << "no KB code has class N03AX exactly";
  } catch (const QueryError& e) {
    EXPECT_EQ(e.code(), Errc::kEmptyClassFilter);
  }
}

TEST(Compile, ClosedNegativeWindowOption) {
  CompileOptions closed;
  closed.closed_negative_window = true;
  const auto task = compile(parse_query(seizure_switch_query(20)), study_kb(), closed);
  EXPECT_TRUE(task.negative->contains(100 - 90, 100));
  EXPECT_TRUE(task.negative->contains(100 - 180, 100));
  EXPECT_FALSE(task.positive.contains(100 - 90, 100));
}

TEST(Compile, Deterministic) {
  const auto ast = parse_query(seizure_switch_query(7));
  EXPECT_EQ(compile(ast, study_kb()), compile(ast, study_kb()));
}

}  // namespace
}  // namespace pathmine
