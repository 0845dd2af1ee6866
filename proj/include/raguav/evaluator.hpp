#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "raguav/bench.hpp"
#include "raguav/pipeline.hpp"
#include "raguav/tolerance.hpp"

namespace raguav::evaluator {

using raguav::exact_match;

enum class Confidence { explicit_cue, fallback };

struct ExtractedNumber {
  double value = 0.0;
  Confidence confidence = Confidence::fallback;
};

struct Extraction {
  std::optional<ExtractedNumber> number;
  bool refusal = false;  // the text declines to answer; number is then absent
};

/// Final numeric answer of a free-text completion. Prefers the number right
/// after the last answer cue ("answer is", "approximately", "≈", "result",
/// "final"), otherwise the last parseable number. Thousands separators,
/// scientific notation (1.5e6, 1.5 \times 10^{6}) and trailing units are
/// handled. Never throws.
Extraction extract(std::string_view raw_text);

inline std::optional<ExtractedNumber> extract_final_number(std::string_view raw_text) {
  return extract(raw_text).number;
}

enum class Verdict { correct, incorrect, absent, adjudicated_correct, adjudicated_incorrect };

const char* to_string(Verdict v) noexcept;
std::optional<Verdict> parse_verdict(std::string_view name) noexcept;

inline bool formulation_ok(Verdict v) noexcept {
  return v == Verdict::correct || v == Verdict::adjudicated_correct;
}

/// Human adjudications: question_id -> model_id -> verdict. Model "*"
/// applies to every model without a specific entry.
class Overrides {
 public:
  Overrides() = default;
  static Overrides parse(std::string_view json_text);
  static Overrides load(const std::filesystem::path& path);

  void set(const std::string& question_id, const std::string& model_id, bool correct);
  std::optional<Verdict> lookup(std::string_view question_id, std::string_view model_id) const;
  bool empty() const noexcept { return entries_.empty(); }

 private:
  std::map<std::string, std::map<std::string, Verdict, std::less<>>, std::less<>> entries_;
};

/// Lowercases, maps Greek letters and LaTeX Greek commands to their names,
/// drops other LaTeX commands, braces, dollars and whitespace.
std::string normalize_formula_text(std::string_view text);

/// correct iff every keyword group matches the normalized text; a group may
/// list alternatives separated by '|'. Overrides win and yield adjudicated_*.
Verdict judge_formulation(std::string_view raw_text, const bench::BenchQuestion& question,
                          const Overrides& overrides = {}, std::string_view model_id = {});

struct RunRecord {
  std::string question_id;
  std::string model_id;
  pipeline::Mode mode = pipeline::Mode::rag;
  std::string raw_text;
  std::optional<double> extracted_value;
  bool refused = false;
  Verdict formulation_verdict = Verdict::absent;
  std::vector<std::string> retrieved_ids;
};

RunRecord make_record(const pipeline::PipelineAnswer& answer, const bench::BenchQuestion& question,
                      const Overrides& overrides = {});

/// Records for a whole run. Throws ValidationError for an empty run or an
/// answer whose question is not in the bench.
std::vector<RunRecord> make_records(std::span<const pipeline::PipelineAnswer> answers,
                                    const bench::BenchSet& bench, const Overrides& overrides = {});

bool is_correct(const RunRecord& record, const bench::BenchQuestion& question) noexcept;

struct LevelCount {
  std::size_t correct = 0;
  std::size_t total = 0;
};

struct ScoreReport {
  std::string model_id;
  std::string mode;
  std::size_t n = 0;
  std::size_t correct_count = 0;
  std::size_t formulation_correct_count = 0;
  std::size_t miscalc_count = 0;
  std::size_t refused_count = 0;
  double correct_pct = 0.0;
  double correct_form_pct = 0.0;
  double miscalc_pct = 0.0;
  double misc_among_correct_form_pct = 0.0;
  double mse = 0.0;
  double log10_mse = 0.0;  // -infinity when mse == 0
  std::map<bench::Level, double> per_level_accuracy;
  std::map<bench::Level, LevelCount> per_level_counts;
};

std::map<bench::Level, double> per_level_accuracy(std::span<const RunRecord> records,
                                                  const bench::BenchSet& bench);

/// Needs exactly one record per bench question (ValidationError otherwise).
/// Missing or refused predictions enter the MSE as 0.
ScoreReport score_run(std::span<const RunRecord> records, const bench::BenchSet& bench);

/// Checks a report, possibly hand-entered from percentages alone: implied
/// counts are integers, correct + miscalc == formulation-correct, MisC
/// equals miscalc / formulation-correct, and overall accuracy is the mean of
/// equal-sized levels. Percentages are compared at 2-decimal precision.
std::vector<std::string> consistency_check(const ScoreReport& report);

double round_to(double value, int decimals) noexcept;

std::string to_json(const ScoreReport& report);
ScoreReport score_from_json(std::string_view json_text);

}  // namespace raguav::evaluator
