#include <gtest/gtest.h>

#include <json.hpp>

#include "raguav/bench.hpp"
#include "raguav/error.hpp"
#include "raguav/io.hpp"
#include "test_support.hpp"

using namespace raguav;
using namespace raguav::bench;
using nlohmann::json;

namespace {

json fixture_json() { return json::parse(io::read_file(testkit::fixture_bench())); }

std::string validation_message(const json& j) {
  try {
    parse_bench(j.dump());
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

BenchQuestion simple(std::string id, Level level, int nested) {
  BenchQuestion q;
  q.id = std::move(id);
  q.level = level;
  q.prompt_text = "p";
  q.ground_truth = 1;
  q.num_nested_equations = nested;
  q.formula_keywords = {"x"};
  return q;
}

}  // namespace

TEST(Bench, FixtureLoads) {
  auto b = load_bench(testkit::fixture_bench());
  ASSERT_EQ(b.questions.size(), 20u);
  EXPECT_TRUE(b.canonical);
  for (auto level : kLevels) {
    EXPECT_EQ(std::count_if(b.questions.begin(), b.questions.end(),
                            [&](const auto& q) { return q.level == level; }),
              5);
  }
  const auto* q11 = b.find("Q1-1");
  ASSERT_NE(q11, nullptr);
  EXPECT_EQ(q11->num_variables, 2);
  EXPECT_EQ(q11->num_nested_equations, 1);
  const auto* q45 = b.find("Q4-5");
  ASSERT_NE(q45, nullptr);
  EXPECT_EQ(q45->num_variables, 7);
  EXPECT_EQ(q45->num_nested_equations, 4);
  for (const auto& q : b.questions)
    if (q.level == Level::Basic) EXPECT_EQ(q.num_nested_equations, 1) << q.id;
  EXPECT_NE(b.find("Q1-2")->prompt_text.find("compute the Blade power of UAV in forward flight"),
            std::string::npos);
}

TEST(Bench, FixtureMatchesPublishedShapes) {
  auto b = load_bench(testkit::fixture_bench());
  EXPECT_TRUE(validate_metadata(b).empty());
  auto stats = level_statistics(b);
  EXPECT_DOUBLE_EQ(stats.at(Level::Basic).mean_nested_equations, 1.0);
  EXPECT_DOUBLE_EQ(stats.at(Level::Expert).mean_nested_equations, 3.4);
}

TEST(Bench, SaveLoadIsByteExact) {
  testkit::TempDir tmp;
  auto b = load_bench(testkit::fixture_bench());
  save_bench(tmp / "b.json", b);
  const auto first = io::read_file(tmp / "b.json");
  auto again = load_bench(tmp / "b.json");
  EXPECT_EQ(serialize_bench(again), first);
}

TEST(Bench, DuplicateIdRejected) {
  auto j = fixture_json();
  j["questions"][1]["id"] = "Q1-1";
  EXPECT_NE(validation_message(j).find("Q1-1: duplicate id"), std::string::npos);
}

TEST(Bench, UnknownLevelRejected) {
  auto j = fixture_json();
  j["questions"][3]["level"] = "Legendary";
  EXPECT_NE(validation_message(j).find("unknown level"), std::string::npos);
}

TEST(Bench, MissingGroundTruthRejected) {
  auto j = fixture_json();
  j["questions"][4].erase("ground_truth");
  auto msg = validation_message(j);
  EXPECT_NE(msg.find("Q1-5"), std::string::npos);
  EXPECT_NE(msg.find("missing ground_truth"), std::string::npos);
}

TEST(Bench, SixInOneLevelRejectedForCanonical) {
  auto j = fixture_json();
  j["questions"][5]["level"] = "Basic";  // Q2-1 moved: Basic 6, Intermediate 4
  EXPECT_FALSE(validation_message(j).empty());
  j["canonical"] = false;
  EXPECT_TRUE(validation_message(j).empty());
}

TEST(Bench, OracleDisagreementRejected) {
  auto j = fixture_json();
  j["questions"][1]["ground_truth"] = 1.9;  // Q1-2 blade power, oracle says 1.7918
  auto msg = validation_message(j);
  EXPECT_NE(msg.find("Q1-2"), std::string::npos);
  EXPECT_NE(msg.find("blade_power"), std::string::npos);
  EXPECT_NO_THROW(parse_bench(j.dump(), /*verify_ground_truth=*/false));
}

TEST(Bench, InvariantViolations) {
  auto j = fixture_json();
  j["questions"][0]["num_variables"] = 0;
  j["questions"][2]["formula_keywords"] = json::array();
  j["questions"][3]["tolerance"] = {{"kind", "relative"}, {"value", 0}};
  j["questions"][6]["formula_id"] = "no_such_formula";
  auto msg = validation_message(j);
  EXPECT_NE(msg.find("Q1-1: num_variables"), std::string::npos);
  EXPECT_NE(msg.find("Q1-3: formula_keywords"), std::string::npos);
  EXPECT_NE(msg.find("Q1-4: tolerance"), std::string::npos);
  EXPECT_NE(msg.find("Q2-2: unknown formula_id"), std::string::npos);
}

TEST(Bench, NotABenchFile) {
  EXPECT_THROW(parse_bench("[]"), ValidationError);
  EXPECT_THROW(parse_bench("{oops"), ValidationError);
  EXPECT_THROW(load_bench("/nonexistent/bench.json"), IoError);
}

TEST(ValidateMetadata, EmptyBenchHasNoDiagnostics) {
  BenchSet empty;
  EXPECT_TRUE(validate_metadata(empty).empty());
}

TEST(ValidateMetadata, InvertedDifficultyIsFlagged) {
  BenchSet b;
  b.version = "1";
  b.questions = {simple("a", Level::Basic, 3), simple("b", Level::Expert, 1)};
  auto d = validate_metadata(b);
  ASSERT_FALSE(d.empty());
  EXPECT_TRUE(std::any_of(d.begin(), d.end(), [](const Diagnostic& x) {
    return x.message.find("Expert mean") != std::string::npos;
  }));
}

TEST(ValidateMetadata, ShapeMismatchIsFlagged) {
  auto b = load_bench(testkit::fixture_bench());
  b.questions[0].num_variables = 9;
  auto d = validate_metadata(b);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].question_id, "Q1-1");
}
