#include "raguav/report.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include <fmt/format.h>

#include "raguav/error.hpp"
#include "raguav/io.hpp"

namespace raguav::report {

using evaluator::ScoreReport;

namespace {

struct MetricRow {
  const char* label;  // table label
  const char* key;    // CSV key
  double (*get)(const ScoreReport&);
  bool percent;
};

constexpr MetricRow kMetricRows[] = {
    {"Correct (%)", "correct_pct", [](const ScoreReport& r) { return r.correct_pct; }, true},
    {"Correct Form. (%)", "correct_form_pct", [](const ScoreReport& r) { return r.correct_form_pct; }, true},
    {"Miscalc. (%)", "miscalc_pct", [](const ScoreReport& r) { return r.miscalc_pct; }, true},
    {"MisC (%)", "misc_among_correct_form_pct",
     [](const ScoreReport& r) { return r.misc_among_correct_form_pct; }, true},
    {"MSE", "mse", [](const ScoreReport& r) { return r.mse; }, false},
    {"log10(MSE)", "log10_mse", [](const ScoreReport& r) { return r.log10_mse; }, false},
};

double level_value(const ScoreReport& r, bench::Level level) {
  auto it = r.per_level_accuracy.find(level);
  return it == r.per_level_accuracy.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
}

std::string cell(double v, bool percent) {
  if (std::isnan(v)) return "-";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return percent ? fmt::format("{:.2f}", v) : format_g6(v);
}

}  // namespace

std::string format_g6(double value) {
  if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
  if (std::isnan(value)) return "nan";
  return fmt::format("{:.6g}", value);
}

std::string render_table(std::span<const ScoreReport> reports) {
  std::size_t label_w = std::string_view("Correct Form. (%)").size();
  std::vector<std::size_t> widths;
  for (const auto& r : reports) widths.push_back(std::max<std::size_t>(r.model_id.size(), 12));

  auto header = [&](std::string_view first) {
    std::string line = fmt::format("{:<{}}", first, label_w);
    for (std::size_t i = 0; i < reports.size(); ++i)
      line += fmt::format("  {:>{}}", reports[i].model_id, widths[i]);
    return line + "\n";
  };
  auto rule = [&] {
    std::size_t total = label_w;
    for (auto w : widths) total += w + 2;
    return std::string(total, '-') + "\n";
  };

  std::string out = header("Metric") + rule();
  for (const auto& row : kMetricRows) {
    out += fmt::format("{:<{}}", row.label, label_w);
    for (std::size_t i = 0; i < reports.size(); ++i)
      out += fmt::format("  {:>{}}", cell(row.get(reports[i]), row.percent), widths[i]);
    out += "\n";
  }
  out += "\nAccuracy by difficulty level (%)\n";
  out += header("Level") + rule();
  for (auto level : bench::kLevels) {
    out += fmt::format("{:<{}}", bench::to_string(level), label_w);
    for (std::size_t i = 0; i < reports.size(); ++i)
      out += fmt::format("  {:>{}}", cell(level_value(reports[i], level), true), widths[i]);
    out += "\n";
  }
  return out;
}

std::string render_csv(std::span<const ScoreReport> reports) {
  std::string out = "metric";
  for (const auto& r : reports) out += "," + r.model_id;
  out += "\n";
  for (const auto& row : kMetricRows) {
    out += row.key;
    for (const auto& r : reports) out += "," + format_g6(row.get(r));
    out += "\n";
  }
  for (auto level : bench::kLevels) {
    out += std::string("accuracy_") + bench::to_string(level);
    for (const auto& r : reports) out += "," + format_g6(level_value(r, level));
    out += "\n";
  }
  return out;
}

std::string render_plot_data(std::span<const ScoreReport> reports) {
  std::string out;
  for (const auto& r : reports) out += r.model_id + "," + format_g6(r.log10_mse) + "\n";
  return out;
}

namespace {

std::vector<std::string> split_commas(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto p = line.find(',', start);
    out.emplace_back(line.substr(start, p == std::string_view::npos ? p : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

double parse_number(const std::string& s) {
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw ValidationError("not a number: '" + s + "'");
  return v;
}

}  // namespace

CsvTable parse_csv(std::string_view csv) {
  CsvTable table;
  const auto lines = io::split_lines(csv);
  if (lines.empty()) throw ValidationError("empty CSV");
  auto head = split_commas(lines[0].text);
  table.models.assign(head.begin() + 1, head.end());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto cells = split_commas(lines[i].text);
    if (cells.size() != head.size()) throw ValidationError("ragged CSV row");
    auto& row = table.rows[cells[0]];
    for (std::size_t c = 1; c < cells.size(); ++c) row.push_back(parse_number(cells[c]));
  }
  return table;
}

std::vector<std::pair<std::string, double>> parse_plot_data(std::string_view text) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& line : io::split_lines(text)) {
    auto comma = line.text.rfind(',');
    if (comma == std::string_view::npos) throw ValidationError("bad plot-data line");
    out.emplace_back(std::string(line.text.substr(0, comma)),
                     parse_number(std::string(line.text.substr(comma + 1))));
  }
  return out;
}

}  // namespace raguav::report
