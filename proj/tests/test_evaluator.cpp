#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "raguav/bench.hpp"
#include "raguav/error.hpp"
#include "raguav/evaluator.hpp"
#include "raguav/io.hpp"
#include "synthetic_runs.hpp"
#include "test_support.hpp"

using namespace raguav;
using namespace raguav::evaluator;
using testkit::Outcome;

namespace {

std::string fixture_text(const std::string& name) {
  return io::read_file(std::filesystem::path(RAGUAV_TEST_FIXTURES) / name);
}

const bench::BenchSet& fixture_bench() {
  static const auto b = bench::load_bench(testkit::fixture_bench());
  return b;
}

bench::BenchSet single_question_bench(double gt) {
  bench::BenchSet b;
  b.version = "1";
  bench::BenchQuestion q;
  q.id = "Q";
  q.prompt_text = "p";
  q.ground_truth = gt;
  q.formula_keywords = {"x"};
  b.questions.push_back(q);
  return b;
}

ScoreReport hand_entered(double correct, double form, double miscalc, double misc) {
  ScoreReport r;
  r.n = 20;
  r.correct_pct = correct;
  r.correct_form_pct = form;
  r.miscalc_pct = miscalc;
  r.misc_among_correct_form_pct = misc;
  return r;
}

double extracted(std::string_view text) {
  auto n = extract_final_number(text);
  return n ? n->value : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

// --- extraction -----------------------------------------------------------

TEST(Extract, ExplicitCue) {
  auto e = extract("The answer is approximately 1.79.");
  ASSERT_TRUE(e.number);
  EXPECT_EQ(e.number->value, 1.79);
  EXPECT_EQ(e.number->confidence, Confidence::explicit_cue);
  EXPECT_FALSE(e.refusal);
}

TEST(Extract, RefusalIsAbsent) {
  auto e = extract("The answer is Insufficient input data.");
  EXPECT_FALSE(e.number);
  EXPECT_TRUE(e.refusal);
}

TEST(Extract, LastCueWins) {
  auto e = extract("\xCE\xB8 \xE2\x89\x88 15.75 degrees ... final: 15.7\xC2\xB0");
  ASSERT_TRUE(e.number);
  EXPECT_EQ(e.number->value, 15.7);
  EXPECT_EQ(e.number->confidence, Confidence::explicit_cue);
}

TEST(Extract, FallbackIsLastNumber) {
  auto e = extract("Using 300 rad/s and 0.4 m we get 1.7918");
  ASSERT_TRUE(e.number);
  EXPECT_EQ(e.number->value, 1.7918);
  EXPECT_EQ(e.number->confidence, Confidence::fallback);
}

TEST(Extract, NumberFormats) {
  EXPECT_EQ(extracted("ground truth is 64,207,051.66"), 64207051.66);
  EXPECT_EQ(extracted("Result: 1.5e6 bit/s"), 1.5e6);
  EXPECT_EQ(extracted("R \\approx 6.64 \\times 10^{6} bit/s"), 6.64e6);
  EXPECT_EQ(extracted("answer: -57 dBm"), -57.0);
  EXPECT_EQ(extracted("$P = 1{,}234.5$ W"), 1234.5);
  EXPECT_EQ(extracted("\\boxed{80.57}"), 80.57);
  EXPECT_EQ(extracted("\\approx30.6\\,\\text{m/s}"), 30.6);
  EXPECT_EQ(extracted("The final answer is 15.76^\\circ"), 15.76);
}

TEST(Extract, IgnoresSubscriptsAndIdentifiers) {
  EXPECT_EQ(extracted("Therefore P_0 = 1.5 and x2 is unused"), 1.5);
  EXPECT_EQ(extracted("log_2(100) is about 6.64"), 6.64);
}

TEST(Extract, NoNumber) {
  EXPECT_FALSE(extract("").number);
  EXPECT_FALSE(extract("no digits here").number);
}

TEST(Extract, NeverThrowsOnArbitraryBytes) {
  std::mt19937_64 rng(42);
  const std::string alphabet = "0123456789.,eE+-^{}\\ approx=answer is\xE2\x89\x88\xC2\xB0\n";
  for (int t = 0; t < 5000; ++t) {
    std::string s(rng() % 60, ' ');
    for (auto& c : s) c = (rng() % 7 == 0) ? static_cast<char>(rng() % 256) : alphabet[rng() % alphabet.size()];
    EXPECT_NO_THROW(extract(s));
  }
}

TEST(Extract, RecordedResponsesAreStable) {
  const auto rag = fixture_text("q1_2_o1_rag.tex");
  const auto no_rag = fixture_text("q1_2_o1_no_rag.tex");
  const auto deepseek = fixture_text("q1_1_deepseek_rag.tex");
  for (int run = 0; run < 3; ++run) {
    auto a = extract(rag);
    ASSERT_TRUE(a.number);
    EXPECT_EQ(a.number->value, 1.79);
    EXPECT_EQ(a.number->confidence, Confidence::explicit_cue);

    auto b = extract(no_rag);
    EXPECT_TRUE(b.refusal);
    EXPECT_FALSE(b.number);

    auto c = extract(deepseek);
    ASSERT_TRUE(c.number);
    EXPECT_EQ(c.number->value, 15.75);
    EXPECT_EQ(c.number->confidence, Confidence::explicit_cue);
  }
}

// --- formulation judging --------------------------------------------------

TEST(Judge, RecordedResponsesAgainstBladeKeywords) {
  const auto& q = *fixture_bench().find("Q1-2");
  EXPECT_EQ(judge_formulation(fixture_text("q1_2_o1_rag.tex"), q), Verdict::correct);
  EXPECT_EQ(judge_formulation(fixture_text("q1_2_o1_no_rag.tex"), q), Verdict::incorrect);
  EXPECT_EQ(judge_formulation("", q), Verdict::absent);
  EXPECT_EQ(judge_formulation("The answer is Insufficient input data.", q), Verdict::absent);
}

TEST(Judge, ElevationKeywords) {
  const auto& q = *fixture_bench().find("Q1-1");
  EXPECT_EQ(judge_formulation(fixture_text("q1_1_deepseek_rag.tex"), q), Verdict::correct);
  EXPECT_EQ(judge_formulation("theta = 15 / 53.11 = 0.28 rad", q), Verdict::incorrect);
}

TEST(Judge, NormalizationFoldsGreekAndLatex) {
  const auto n = normalize_formula_text("P_0 \\left(1 + \\frac{3V^2}{\\Omega^2 R^2}\\right)");
  EXPECT_NE(n.find("p_0"), std::string::npos) << n;
  EXPECT_NE(n.find("1+3v^2"), std::string::npos) << n;
  EXPECT_NE(n.find("omega^2r^2"), std::string::npos) << n;
  EXPECT_EQ(normalize_formula_text("\xCE\xA9 R"), normalize_formula_text("\\Omega R"));
  EXPECT_EQ(normalize_formula_text("$a \\cdot b$"), "a*b");
  EXPECT_EQ(normalize_formula_text("  X  Y "), "xy");
}

TEST(Judge, OverridesWin) {
  const auto& q = *fixture_bench().find("Q1-2");
  auto o = Overrides::parse(R"({"Q1-2": {"o1": "incorrect", "*": "correct"}})");
  EXPECT_EQ(judge_formulation(fixture_text("q1_2_o1_rag.tex"), q, o, "o1"), Verdict::adjudicated_incorrect);
  EXPECT_EQ(judge_formulation("", q, o, "mistral"), Verdict::adjudicated_correct);
  EXPECT_TRUE(formulation_ok(Verdict::adjudicated_correct));
  EXPECT_FALSE(formulation_ok(Verdict::adjudicated_incorrect));
  EXPECT_THROW(Overrides::parse(R"({"Q1-2": {"o1": "maybe"}})"), ValidationError);
  EXPECT_THROW(Overrides::parse("[1]"), ValidationError);
}

// --- tolerance ------------------------------------------------------------

TEST(ExactMatch, ReferenceDecisions) {
  EXPECT_TRUE(exact_match(1.79205, 1.79, {ToleranceKind::relative, 2e-3}));
  EXPECT_FALSE(exact_match(0.5535, 0.5, {ToleranceKind::relative, 1e-3}));
  for (double x : {0.0, -3.5, 1e12, 1e-12}) EXPECT_TRUE(exact_match(x, x, {ToleranceKind::absolute, 1e-300}));
  EXPECT_FALSE(exact_match(std::nan(""), 1.0, {}));
  EXPECT_TRUE(exact_match(0.00005, 0.0, {ToleranceKind::relative, kGlobalTolerance}));
  EXPECT_FALSE(exact_match(1.1, 1.0, {ToleranceKind::absolute, 0.05}));
}

// --- scoring --------------------------------------------------------------

TEST(ScoreRun, TurboShapedRun) {
  const auto& b = fixture_bench();
  auto records = testkit::synthetic_run(b, testkit::outcomes_with_counts(20, 11, 4));
  auto r = score_run(records, b);
  EXPECT_EQ(r.correct_pct, 55.0);
  EXPECT_EQ(r.correct_form_pct, 75.0);
  EXPECT_EQ(round_to(r.misc_among_correct_form_pct, 2), 26.67);
  EXPECT_TRUE(consistency_check(r).empty());
}

TEST(ScoreRun, AllCorrect) {
  const auto& b = fixture_bench();
  auto r = score_run(testkit::synthetic_run(b, std::vector<Outcome>(20, Outcome::correct)), b);
  EXPECT_EQ(r.correct_pct, 100.0);
  EXPECT_EQ(r.correct_form_pct, 100.0);
  EXPECT_EQ(r.miscalc_pct, 0.0);
  EXPECT_EQ(r.misc_among_correct_form_pct, 0.0);
  EXPECT_EQ(r.mse, 0.0);
  EXPECT_TRUE(std::isinf(r.log10_mse) && r.log10_mse < 0);
}

TEST(ScoreRun, LuckyWrongFormulaIsIncorrect) {
  const auto& b = fixture_bench();
  auto r = score_run(testkit::synthetic_run(b, std::vector<Outcome>(20, Outcome::wrong_formula)), b);
  EXPECT_EQ(r.correct_pct, 0.0);
  EXPECT_EQ(r.mse, 0.0);
}

TEST(ScoreRun, AllRefusalsMseIsMeanSquaredTruth) {
  const auto& b = fixture_bench();
  auto r = score_run(testkit::synthetic_run(b, std::vector<Outcome>(20, Outcome::refused)), b);
  double want = 0;
  for (const auto& q : b.questions) want += q.ground_truth * q.ground_truth;
  want /= 20;
  EXPECT_EQ(r.correct_pct, 0.0);
  EXPECT_EQ(r.refused_count, 20u);
  EXPECT_NEAR(r.mse, want, 1e-12 * want);
}

TEST(ScoreRun, SingleQuestionMse) {
  auto b = single_question_bench(64207051.66);
  RunRecord rec;
  rec.question_id = "Q";
  rec.formulation_verdict = Verdict::incorrect;
  rec.extracted_value = 70.2;
  std::vector<RunRecord> records{rec};
  auto r = score_run(records, b);
  EXPECT_NEAR(r.mse, 4122536468204783.7316, 1e-6 * 4122536468204783.7316);
  EXPECT_NEAR(r.log10_mse, 15.615164506128576, 1e-9);

  records[0].extracted_value.reset();
  records[0].refused = true;
  EXPECT_EQ(score_run(records, b).mse, 64207051.66 * 64207051.66);
  records[0].refused = false;
  records[0].extracted_value = 0.0;
  EXPECT_EQ(score_run(records, b).mse, 64207051.66 * 64207051.66);
}

TEST(ScoreRun, MseInvariantToOrder) {
  const auto& b = fixture_bench();
  std::mt19937_64 rng(8);
  auto records = testkit::synthetic_run(b, testkit::random_outcomes(rng, 20));
  const auto base = score_run(records, b);
  for (int t = 0; t < 20; ++t) {
    std::shuffle(records.begin(), records.end(), rng);
    auto r = score_run(records, b);
    EXPECT_EQ(r.mse, base.mse);
    EXPECT_EQ(r.correct_pct, base.correct_pct);
  }
}

TEST(ScoreRun, CoverageErrors) {
  const auto& b = fixture_bench();
  auto records = testkit::synthetic_run(b, std::vector<Outcome>(20, Outcome::correct));
  auto missing = records;
  missing.pop_back();
  EXPECT_THROW(score_run(missing, b), ValidationError);
  auto dup = records;
  dup.back() = dup.front();
  EXPECT_THROW(score_run(dup, b), ValidationError);
  EXPECT_THROW(score_run(std::vector<RunRecord>{}, b), ValidationError);
}

TEST(ScoreRun, IdentitiesOnRandomMasks) {
  const auto& b = fixture_bench();
  std::mt19937_64 rng(99);
  for (int t = 0; t < 1000; ++t) {
    auto r = score_run(testkit::synthetic_run(b, testkit::random_outcomes(rng, 20)), b);
    ASSERT_EQ(r.correct_count + r.miscalc_count, r.formulation_correct_count);
    if (r.formulation_correct_count) {
      ASSERT_EQ(r.misc_among_correct_form_pct,
                100.0 * static_cast<double>(r.miscalc_count) / static_cast<double>(r.formulation_correct_count));
    }
    double mean = 0;
    for (const auto& [l, v] : r.per_level_accuracy) mean += v;
    ASSERT_NEAR(mean / 4, r.correct_pct, 1e-12);
    ASSERT_TRUE(consistency_check(r).empty());
  }
}

TEST(PerLevelAccuracy, O1Row) {
  const auto& b = fixture_bench();
  auto records = testkit::synthetic_run(b, testkit::outcomes_per_level(b, {4, 3, 4, 4}));
  auto acc = per_level_accuracy(records, b);
  EXPECT_EQ(acc.at(bench::Level::Basic), 80.0);
  EXPECT_EQ(acc.at(bench::Level::Intermediate), 60.0);
  EXPECT_EQ(acc.at(bench::Level::Advanced), 80.0);
  EXPECT_EQ(acc.at(bench::Level::Expert), 80.0);
  EXPECT_EQ(score_run(records, b).correct_pct, 75.0);

  auto zero = testkit::synthetic_run(b, testkit::outcomes_per_level(b, {0, 0, 0, 0}));
  for (const auto& [l, v] : per_level_accuracy(zero, b)) EXPECT_EQ(v, 0.0);
}

TEST(ConsistencyCheck, PublishedRows) {
  EXPECT_TRUE(consistency_check(hand_entered(30, 75, 45, 60.00)).empty());
  EXPECT_FALSE(consistency_check(hand_entered(60, 75, 20, 26.67)).empty());
  EXPECT_FALSE(consistency_check(hand_entered(75, 95, 15, 21.05)).empty());
  EXPECT_FALSE(consistency_check(hand_entered(33.3, 75, 45, 60)).empty());
  EXPECT_FALSE(consistency_check(hand_entered(130, 75, 45, 60)).empty());
}

TEST(ConsistencyCheck, MiscValuesFromImpliedCounts) {
  struct Row {
    std::size_t form, miscalc;
    double misc;
  };
  for (const auto& row : {Row{15, 9, 60.00}, Row{17, 2, 11.76}, Row{15, 4, 26.67}, Row{14, 11, 78.57},
                          Row{12, 10, 83.33}, Row{18, 7, 38.89}, Row{13, 6, 46.15}}) {
    const auto& b = fixture_bench();
    auto r = score_run(testkit::synthetic_run(b, testkit::outcomes_with_counts(20, row.form - row.miscalc, row.miscalc)), b);
    EXPECT_EQ(round_to(r.misc_among_correct_form_pct, 2), row.misc) << row.form << "/" << row.miscalc;
  }
}

TEST(ScoreJson, RoundTrip) {
  const auto& b = fixture_bench();
  std::mt19937_64 rng(1);
  auto r = score_run(testkit::synthetic_run(b, testkit::random_outcomes(rng, 20), "o1"), b);
  auto back = score_from_json(to_json(r));
  EXPECT_EQ(back.model_id, "o1");
  EXPECT_EQ(back.correct_count, r.correct_count);
  EXPECT_EQ(back.mse, r.mse);
  EXPECT_EQ(back.per_level_accuracy, r.per_level_accuracy);
  EXPECT_EQ(to_json(back), to_json(r));

  auto perfect = score_run(testkit::synthetic_run(b, std::vector<Outcome>(20, Outcome::correct)), b);
  auto pb = score_from_json(to_json(perfect));
  EXPECT_TRUE(std::isinf(pb.log10_mse) && pb.log10_mse < 0);
}

TEST(MakeRecords, FromAnswers) {
  const auto& b = fixture_bench();
  pipeline::PipelineAnswer a;
  a.question_id = "Q1-2";
  a.model_id = "o1";
  a.response_text = fixture_text("q1_2_o1_rag.tex");
  auto rec = make_record(a, *b.find("Q1-2"));
  EXPECT_EQ(rec.formulation_verdict, Verdict::correct);
  EXPECT_EQ(rec.extracted_value, 1.79);
  EXPECT_TRUE(is_correct(rec, *b.find("Q1-2")));

  a.response_text = fixture_text("q1_2_o1_no_rag.tex");
  rec = make_record(a, *b.find("Q1-2"));
  EXPECT_TRUE(rec.refused);
  EXPECT_FALSE(rec.extracted_value);

  std::vector<pipeline::PipelineAnswer> none;
  EXPECT_THROW(make_records(none, b), ValidationError);
  a.question_id = "Q9-9";
  std::vector<pipeline::PipelineAnswer> unknown{a};
  EXPECT_THROW(make_records(unknown, b), ValidationError);
}
