#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "raguav/evaluator.hpp"

namespace raguav::report {

/// Comparison table: one column per model, metric rows first (Correct,
/// Correct Form., Miscalc., MisC, MSE, log10 MSE), then a per-level
/// accuracy section with levels as rows.
std::string render_table(std::span<const evaluator::ScoreReport> reports);

/// Same content as CSV, numbers at 6 significant digits.
std::string render_csv(std::span<const evaluator::ScoreReport> reports);

/// "model_id,log10_mse" per line; a perfect run writes -inf.
std::string render_plot_data(std::span<const evaluator::ScoreReport> reports);

/// Number formatting used by the CSV and plot files.
std::string format_g6(double value);

struct CsvTable {
  std::vector<std::string> models;
  std::map<std::string, std::vector<double>> rows;  // metric -> one value per model
};

CsvTable parse_csv(std::string_view csv);
std::vector<std::pair<std::string, double>> parse_plot_data(std::string_view text);

}  // namespace raguav::report
