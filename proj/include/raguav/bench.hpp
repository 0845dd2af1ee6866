#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "raguav/tolerance.hpp"
#include "raguav/units.hpp"

namespace raguav::bench {

enum class Level { Basic, Intermediate, Advanced, Expert };

inline constexpr std::array kLevels{Level::Basic, Level::Intermediate, Level::Advanced,
                                    Level::Expert};

const char* to_string(Level level) noexcept;
std::optional<Level> parse_level(std::string_view name) noexcept;

struct BenchQuestion {
  std::string id;
  Level level = Level::Basic;
  std::string prompt_text;
  std::map<std::string, units::Quantity> parameters;
  double ground_truth = 0.0;
  std::string gt_unit;
  ToleranceSpec tolerance;
  int num_variables = 1;
  int num_nested_equations = 1;
  std::string formula_id;  // empty for data-only questions
  std::vector<std::string> formula_keywords;

  bool has_formula() const noexcept { return !formula_id.empty(); }
};

struct BenchSet {
  std::string name;
  std::string version;
  bool canonical = false;  // canonical sets must hold 20 questions, 5 per level
  std::vector<BenchQuestion> questions;

  const BenchQuestion* find(std::string_view id) const noexcept;
};

inline constexpr std::size_t kCanonicalQuestionCount = 20;
inline constexpr std::size_t kCanonicalPerLevel = 5;

/// Published per-question shape of the canonical set: variable count and
/// nested-equation depth.
struct QuestionShape {
  std::string_view id;
  Level level;
  int num_variables;
  int num_nested_equations;
};

inline constexpr std::array<QuestionShape, 20> kCanonicalShapes{{
    {"Q1-1", Level::Basic, 2, 1},        {"Q1-2", Level::Basic, 3, 1},
    {"Q1-3", Level::Basic, 2, 1},        {"Q1-4", Level::Basic, 2, 1},
    {"Q1-5", Level::Basic, 3, 1},        {"Q2-1", Level::Intermediate, 2, 2},
    {"Q2-2", Level::Intermediate, 4, 2}, {"Q2-3", Level::Intermediate, 3, 1},
    {"Q2-4", Level::Intermediate, 3, 1}, {"Q2-5", Level::Intermediate, 4, 2},
    {"Q3-1", Level::Advanced, 4, 2},     {"Q3-2", Level::Advanced, 5, 2},
    {"Q3-3", Level::Advanced, 4, 2},     {"Q3-4", Level::Advanced, 3, 2},
    {"Q3-5", Level::Advanced, 5, 3},     {"Q4-1", Level::Expert, 6, 3},
    {"Q4-2", Level::Expert, 6, 3},       {"Q4-3", Level::Expert, 5, 3},
    {"Q4-4", Level::Expert, 6, 4},       {"Q4-5", Level::Expert, 7, 4},
}};

/// Parses and validates. Every violation is collected and reported in one
/// ValidationError that names the offending question ids. Questions with a
/// formula_id are recomputed by the oracle and must match ground_truth
/// within their tolerance.
BenchSet parse_bench(std::string_view json_text, bool verify_ground_truth = true);
BenchSet load_bench(const std::filesystem::path& path, bool verify_ground_truth = true);

/// Stable pretty-printed JSON. parse then serialize of a serialized bench is
/// byte-identical.
std::string serialize_bench(const BenchSet& bench);
void save_bench(const std::filesystem::path& path, const BenchSet& bench);

/// Structural problems that make the set unusable; empty when valid.
std::vector<std::string> structural_errors(const BenchSet& bench);

/// Oracle-vs-data disagreements for questions with a bound formula.
std::vector<std::string> ground_truth_errors(const BenchSet& bench);

struct LevelStats {
  std::size_t count = 0;
  double mean_variables = 0.0;
  double mean_nested_equations = 0.0;
};

std::map<Level, LevelStats> level_statistics(const BenchSet& bench);

struct Diagnostic {
  std::string question_id;  // empty for set-wide findings
  std::string message;
};

/// Advisory checks: per-level counts, difficulty monotonicity, and agreement
/// with kCanonicalShapes for canonical sets.
std::vector<Diagnostic> validate_metadata(const BenchSet& bench);

}  // namespace raguav::bench
