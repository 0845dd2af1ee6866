#include "raguav/evaluator.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>

#include <json.hpp>

#include "raguav/error.hpp"
#include "raguav/io.hpp"

namespace raguav::evaluator {

using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Number extraction

namespace {

bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }
bool is_alpha(char c) noexcept { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

/// Lowercased copy with a few multi-byte symbols folded to ASCII so that the
/// scanner below can work byte-wise.
std::string fold_text(std::string_view text) {
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 6> kFolds{{
      {"\xE2\x88\x92", "-"},          // U+2212 minus
      {"\xE2\x89\x88", " \\approx "},  // U+2248
      {"\xE2\x89\x83", " \\approx "},  // U+2243
      {"\xC3\x97", " \\times "},       // U+00D7
      {"\xC2\xA0", " "},               // no-break space
      {"\xE2\x80\x89", " "},           // thin space
  }};
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    bool folded = false;
    for (const auto& [from, to] : kFolds) {
      if (text.substr(i, from.size()) == from) {
        out += to;
        i += from.size();
        folded = true;
        break;
      }
    }
    if (folded) continue;
    char c = text[i++];
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

struct NumberToken {
  std::size_t begin;
  std::size_t end;
  double value;
};

bool starts_with_at(std::string_view s, std::size_t pos, std::string_view prefix) {
  return s.substr(pos, prefix.size()) == prefix;
}

std::size_t skip_spaces(std::string_view s, std::size_t pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  return pos;
}

/// "\times 10^{6}", "x10^6", "*10^-3" after a mantissa. Returns the exponent
/// and advances pos on success.
std::optional<int> parse_power_of_ten(std::string_view s, std::size_t& pos) {
  std::size_t p = skip_spaces(s, pos);
  if (starts_with_at(s, p, "\\times")) p += 6;
  else if (starts_with_at(s, p, "\\cdot")) p += 5;
  else if (p < s.size() && (s[p] == 'x' || s[p] == '*')) ++p;
  else return std::nullopt;
  p = skip_spaces(s, p);
  if (!starts_with_at(s, p, "10^")) return std::nullopt;
  p += 3;
  bool braced = p < s.size() && s[p] == '{';
  if (braced) ++p;
  int sign = 1;
  if (p < s.size() && (s[p] == '-' || s[p] == '+')) {
    if (s[p] == '-') sign = -1;
    ++p;
  }
  if (p >= s.size() || !is_digit(s[p])) return std::nullopt;
  int exp = 0;
  while (p < s.size() && is_digit(s[p])) exp = exp * 10 + (s[p++] - '0');
  if (braced) {
    if (p >= s.size() || s[p] != '}') return std::nullopt;
    ++p;
  }
  pos = p;
  return sign * exp;
}

/// Three-digit group after a thousands separator at pos ("," "\," "{,}").
std::optional<std::size_t> thousands_group(std::string_view s, std::size_t pos) {
  std::size_t p = pos;
  if (starts_with_at(s, p, ",")) p += 1;
  else if (starts_with_at(s, p, "\\,")) p += 2;
  else if (starts_with_at(s, p, "{,}")) p += 3;
  else return std::nullopt;
  if (p + 3 > s.size()) return std::nullopt;
  for (std::size_t k = 0; k < 3; ++k) {
    if (!is_digit(s[p + k])) return std::nullopt;
  }
  if (p + 3 < s.size() && is_digit(s[p + 3])) return std::nullopt;
  return p;
}

std::vector<NumberToken> scan_numbers(std::string_view s) {
  std::vector<NumberToken> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    const char prev = i > 0 ? s[i - 1] : ' ';
    const bool sign = (c == '-' || c == '+') && i + 1 < s.size() &&
                      (is_digit(s[i + 1]) || (s[i + 1] == '.' && i + 2 < s.size() && is_digit(s[i + 2])));
    const bool lead_dot = c == '.' && i + 1 < s.size() && is_digit(s[i + 1]) && !is_digit(prev);
    if (!is_digit(c) && !sign && !lead_dot) {
      ++i;
      continue;
    }
    // Digits glued to identifiers, subscripts or exponents (q1, p_0, v^2) are not answers.
    bool attached = prev == '_' || prev == '^' || is_digit(prev) ||
                    (sign && (is_alpha(prev) || prev == ')'));
    if (!attached && is_alpha(prev)) {
      // Letters right before the number: an identifier (q1, o1) unless they
      // are a LaTeX command name such as \approx.
      std::size_t k = i;
      while (k > 0 && is_alpha(s[k - 1])) --k;
      attached = k == 0 || s[k - 1] != '\\';
    }
    const std::size_t begin = i;
    std::string digits;
    if (sign) {
      if (c == '-') digits.push_back('-');
      ++i;
    }
    std::size_t int_len = 0;
    while (i < s.size() && is_digit(s[i])) {
      digits.push_back(s[i++]);
      ++int_len;
    }
    if (int_len > 0 && int_len <= 3) {
      while (auto g = thousands_group(s, i)) {
        digits.append(s.substr(*g, 3));
        i = *g + 3;
      }
    }
    if (i + 1 < s.size() && s[i] == '.' && is_digit(s[i + 1])) {
      digits.push_back(s[i++]);
      while (i < s.size() && is_digit(s[i])) digits.push_back(s[i++]);
    }
    if (i + 1 < s.size() && s[i] == 'e') {
      std::size_t p = i + 1;
      if (p < s.size() && (s[p] == '-' || s[p] == '+')) ++p;
      if (p < s.size() && is_digit(s[p])) {
        digits.push_back('e');
        digits.append(s.substr(i + 1, p - i - 1));
        i = p;
        while (i < s.size() && is_digit(s[i])) digits.push_back(s[i++]);
      }
    }
    if (auto exp10 = parse_power_of_ten(s, i)) {
      digits += "e" + std::to_string(*exp10);
    }
    if (attached) continue;
    char* endp = nullptr;
    const double v = std::strtod(digits.c_str(), &endp);
    if (endp != digits.c_str() && std::isfinite(v)) out.push_back({begin, i, v});
  }
  return out;
}

constexpr std::array<std::string_view, 12> kAnswerCues{
    "answer is", "answer:", "final answer", "final", "approximately", "approx.",
    "\\approx",  "result",  "roughly",      "\\simeq", "equals",   "\\boxed"};

constexpr std::array<std::string_view, 16> kRefusalPhrases{
    "insufficient input",      "insufficient information", "insufficient data",
    "not enough information",  "cannot be determined",     "can't be determined",
    "cannot determine",        "unable to compute",        "unable to determine",
    "more information is needed", "need more information", "not possible to compute",
    "cannot compute",          "cannot be computed",       "no way to",
    "please provide"};

/// Skips the filler that may sit between a cue and its number.
std::size_t skip_cue_filler(std::string_view s, std::size_t pos) {
  static constexpr std::array<std::string_view, 10> kLatexFiller{
      "\\approx", "\\boxed", "\\,", "\\;", "\\!", "\\quad", "\\(", "\\[", "\\text{", "\\mathbf{"};
  while (pos < s.size()) {
    const char c = s[pos];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '$' || c == ':' || c == '=' ||
        c == '*' || c == '(' || c == '{' || c == '~' || c == '"' || c == '\'') {
      ++pos;
      continue;
    }
    bool skipped = false;
    for (auto f : kLatexFiller) {
      if (starts_with_at(s, pos, f)) {
        pos += f.size();
        skipped = true;
        break;
      }
    }
    if (!skipped) break;
  }
  return pos;
}

std::optional<std::size_t> last_refusal_position(std::string_view folded) {
  std::optional<std::size_t> last;
  for (auto phrase : kRefusalPhrases) {
    auto p = folded.rfind(phrase);
    if (p != std::string_view::npos && (!last || p > *last)) last = p;
  }
  return last;
}

}  // namespace

Extraction extract(std::string_view raw_text) {
  Extraction result;
  const std::string folded = fold_text(raw_text);
  const std::string_view s = folded;
  if (s.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    result.refusal = true;
    return result;
  }
  const auto numbers = scan_numbers(s);

  std::optional<NumberToken> explicit_number;
  for (auto cue : kAnswerCues) {
    for (auto p = s.find(cue); p != std::string_view::npos; p = s.find(cue, p + 1)) {
      // Cue words must not be the middle of a longer word ("finally" is fine, "resulting" too).
      if (is_alpha(cue.front()) && p > 0 && is_alpha(s[p - 1])) continue;
      const auto at = skip_cue_filler(s, p + cue.size());
      auto it = std::find_if(numbers.begin(), numbers.end(),
                             [at](const NumberToken& t) { return t.begin == at; });
      if (it != numbers.end() && (!explicit_number || it->begin > explicit_number->begin))
        explicit_number = *it;
    }
  }

  const auto refusal_at = last_refusal_position(s);
  if (explicit_number && (!refusal_at || explicit_number->begin > *refusal_at)) {
    result.number = ExtractedNumber{explicit_number->value, Confidence::explicit_cue};
    return result;
  }
  if (refusal_at) {
    result.refusal = true;
    return result;
  }
  if (!numbers.empty()) result.number = ExtractedNumber{numbers.back().value, Confidence::fallback};
  return result;
}

// ---------------------------------------------------------------------------
// Formulation judging

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::correct: return "correct";
    case Verdict::incorrect: return "incorrect";
    case Verdict::absent: return "absent";
    case Verdict::adjudicated_correct: return "adjudicated_correct";
    case Verdict::adjudicated_incorrect: return "adjudicated_incorrect";
  }
  return "absent";
}

std::optional<Verdict> parse_verdict(std::string_view name) noexcept {
  for (auto v : {Verdict::correct, Verdict::incorrect, Verdict::absent,
                 Verdict::adjudicated_correct, Verdict::adjudicated_incorrect}) {
    if (name == to_string(v)) return v;
  }
  return std::nullopt;
}

Overrides Overrides::parse(std::string_view json_text) {
  Overrides out;
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("overrides file is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ValidationError("overrides file must be a JSON object");
  for (const auto& [qid, models] : root.items()) {
    if (!models.is_object()) throw ValidationError("overrides for " + qid + " must be an object");
    for (const auto& [model, verdict] : models.items()) {
      auto v = verdict.is_string() ? parse_verdict(verdict.get<std::string>()) : std::nullopt;
      if (!v || *v == Verdict::absent)
        throw ValidationError("override " + qid + "/" + model + " must be correct or incorrect");
      out.set(qid, model, formulation_ok(*v));
    }
  }
  return out;
}

Overrides Overrides::load(const std::filesystem::path& path) { return parse(io::read_file(path)); }

void Overrides::set(const std::string& question_id, const std::string& model_id, bool correct) {
  entries_[question_id][model_id] =
      correct ? Verdict::adjudicated_correct : Verdict::adjudicated_incorrect;
}

std::optional<Verdict> Overrides::lookup(std::string_view question_id,
                                         std::string_view model_id) const {
  auto q = entries_.find(question_id);
  if (q == entries_.end()) return std::nullopt;
  if (auto m = q->second.find(model_id); m != q->second.end()) return m->second;
  if (auto m = q->second.find("*"); m != q->second.end()) return m->second;
  return std::nullopt;
}

namespace {

constexpr std::array<std::string_view, 24> kGreek{
    "alpha", "beta",  "gamma", "delta", "epsilon", "zeta",  "eta",   "theta",
    "iota",  "kappa", "lambda", "mu",   "nu",      "xi",    "pi",    "rho",
    "sigma", "tau",   "upsilon", "phi", "chi",     "psi",   "omega", "varepsilon"};

constexpr std::array<std::string_view, 9> kKeptCommands{"sqrt", "log", "ln",  "exp", "sin",
                                                        "cos",  "tan", "arctan", "atan"};

// UTF-8 Greek letters (upper and lower) and a few math symbols.
constexpr std::array<std::pair<std::string_view, std::string_view>, 26> kUnicodeFolds{{
    {"\xCE\xA9", "omega"}, {"\xCF\x89", "omega"}, {"\xCE\x98", "theta"}, {"\xCE\xB8", "theta"},
    {"\xCF\x81", "rho"},   {"\xCF\x83", "sigma"}, {"\xCE\xA3", "sigma"}, {"\xCF\x80", "pi"},
    {"\xCE\xB7", "eta"},   {"\xCE\xBB", "lambda"}, {"\xCE\x94", "delta"}, {"\xCE\xB4", "delta"},
    {"\xCE\xBC", "mu"},    {"\xCE\xB1", "alpha"}, {"\xCE\xB2", "beta"},  {"\xCE\xB3", "gamma"},
    {"\xCE\xBD", "nu"},    {"\xCF\x86", "phi"},   {"\xCE\xB5", "epsilon"}, {"\xCF\x84", "tau"},
    {"\xC2\xB2", "^2"},    {"\xC2\xB3", "^3"},    {"\xC2\xB7", "*"},     {"\xC3\x97", "*"},
    {"\xE2\x88\x92", "-"}, {"\xE2\x88\x9A", "sqrt"},
}};

}  // namespace

std::string normalize_formula_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    bool folded = false;
    for (const auto& [from, to] : kUnicodeFolds) {
      if (text.substr(i, from.size()) == from) {
        out += to;
        i += from.size();
        folded = true;
        break;
      }
    }
    if (folded) continue;

    const char c = text[i];
    if (c == '\\') {
      std::size_t j = i + 1;
      while (j < text.size() && is_alpha(text[j])) ++j;
      if (j == i + 1) {
        i += (i + 1 < text.size()) ? 2 : 1;  // "\," "\;" "\\" and friends
        continue;
      }
      std::string name(text.substr(i + 1, j - i - 1));
      std::transform(name.begin(), name.end(), name.begin(),
                     [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
      if (name == "cdot" || name == "times") {
        out.push_back('*');
      } else if (std::find(kGreek.begin(), kGreek.end(), name) != kGreek.end() ||
                 std::find(kKeptCommands.begin(), kKeptCommands.end(), name) != kKeptCommands.end()) {
        out += name == "varepsilon" ? "epsilon" : name;
      }
      i = j;
      continue;
    }
    if (c == '{' || c == '}' || c == '$' || std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    ++i;
  }
  return out;
}

namespace {

bool group_matches(std::string_view group, std::string_view normalized_text) {
  std::size_t start = 0;
  while (start <= group.size()) {
    auto bar = group.find('|', start);
    if (bar == std::string_view::npos) bar = group.size();
    const auto alt = normalize_formula_text(group.substr(start, bar - start));
    if (!alt.empty() && normalized_text.find(alt) != std::string_view::npos) return true;
    start = bar + 1;
  }
  return false;
}

bool has_math(std::string_view text) {
  return text.find('=') != std::string_view::npos || text.find("\\approx") != std::string_view::npos ||
         text.find("\\frac") != std::string_view::npos ||
         text.find("\xE2\x89\x88") != std::string_view::npos;
}

}  // namespace

Verdict judge_formulation(std::string_view raw_text, const bench::BenchQuestion& question,
                          const Overrides& overrides, std::string_view model_id) {
  if (auto v = overrides.lookup(question.id, model_id)) return *v;
  if (raw_text.find_first_not_of(" \t\r\n") == std::string_view::npos) return Verdict::absent;

  const auto normalized = normalize_formula_text(raw_text);
  const bool all = !question.formula_keywords.empty() &&
                   std::all_of(question.formula_keywords.begin(), question.formula_keywords.end(),
                               [&](const std::string& g) { return group_matches(g, normalized); });
  if (all) return Verdict::correct;
  // A refusal that never writes down a formula did not select one.
  if (extract(raw_text).refusal && !has_math(raw_text)) return Verdict::absent;
  return Verdict::incorrect;
}

// ---------------------------------------------------------------------------
// Records and scoring

RunRecord make_record(const pipeline::PipelineAnswer& answer, const bench::BenchQuestion& question,
                      const Overrides& overrides) {
  RunRecord r;
  r.question_id = answer.question_id;
  r.model_id = answer.model_id;
  r.mode = answer.mode;
  r.raw_text = answer.response_text;
  for (const auto& hit : answer.retrieved) r.retrieved_ids.push_back(hit.chunk_id);

  const auto extraction = extract(answer.response_text);
  r.refused = extraction.refusal;
  if (extraction.number && !extraction.refusal) r.extracted_value = extraction.number->value;
  r.formulation_verdict = judge_formulation(answer.response_text, question, overrides, answer.model_id);
  return r;
}

std::vector<RunRecord> make_records(std::span<const pipeline::PipelineAnswer> answers,
                                    const bench::BenchSet& bench, const Overrides& overrides) {
  if (answers.empty()) throw ValidationError("run has no answers");
  std::vector<RunRecord> out;
  out.reserve(answers.size());
  for (const auto& a : answers) {
    const auto* q = bench.find(a.question_id);
    if (q == nullptr) throw ValidationError("run answers unknown question " + a.question_id);
    out.push_back(make_record(a, *q, overrides));
  }
  return out;
}

bool is_correct(const RunRecord& record, const bench::BenchQuestion& question) noexcept {
  return formulation_ok(record.formulation_verdict) && record.extracted_value &&
         exact_match(*record.extracted_value, question.ground_truth, question.tolerance);
}

namespace {

/// Pairs each bench question with its record; enforces one-to-one coverage.
std::vector<std::pair<const bench::BenchQuestion*, const RunRecord*>> align(
    std::span<const RunRecord> records, const bench::BenchSet& bench) {
  if (records.empty()) throw ValidationError("run has no records");
  std::map<std::string_view, const RunRecord*> by_id;
  for (const auto& r : records) {
    if (bench.find(r.question_id) == nullptr)
      throw ValidationError("record for unknown question " + r.question_id);
    if (!by_id.emplace(r.question_id, &r).second)
      throw ValidationError("duplicate record for question " + r.question_id);
  }
  std::vector<std::pair<const bench::BenchQuestion*, const RunRecord*>> out;
  for (const auto& q : bench.questions) {
    auto it = by_id.find(q.id);
    if (it == by_id.end()) throw ValidationError("missing record for question " + q.id);
    out.emplace_back(&q, it->second);
  }
  return out;
}

double pct(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

std::map<bench::Level, double> per_level_accuracy(std::span<const RunRecord> records,
                                                  const bench::BenchSet& bench) {
  std::map<bench::Level, LevelCount> counts;
  for (const auto& [q, r] : align(records, bench)) {
    auto& c = counts[q->level];
    ++c.total;
    if (is_correct(*r, *q)) ++c.correct;
  }
  std::map<bench::Level, double> out;
  for (const auto& [level, c] : counts) out[level] = pct(c.correct, c.total);
  return out;
}

ScoreReport score_run(std::span<const RunRecord> records, const bench::BenchSet& bench) {
  const auto pairs = align(records, bench);
  ScoreReport report;
  report.model_id = records.front().model_id;
  report.mode = pipeline::to_string(records.front().mode);
  report.n = pairs.size();

  double sq_sum = 0.0;
  for (const auto& [q, r] : pairs) {
    auto& level = report.per_level_counts[q->level];
    ++level.total;
    const bool form = formulation_ok(r->formulation_verdict);
    const bool match = is_correct(*r, *q);
    if (form) ++report.formulation_correct_count;
    if (match) {
      ++report.correct_count;
      ++level.correct;
    } else if (form) {
      ++report.miscalc_count;
    }
    if (r->refused) ++report.refused_count;
    const double pred = r->extracted_value.value_or(0.0);
    const double err = pred - q->ground_truth;
    sq_sum += err * err;
  }

  report.correct_pct = pct(report.correct_count, report.n);
  report.correct_form_pct = pct(report.formulation_correct_count, report.n);
  report.miscalc_pct = pct(report.miscalc_count, report.n);
  report.misc_among_correct_form_pct = pct(report.miscalc_count, report.formulation_correct_count);
  report.mse = sq_sum / static_cast<double>(report.n);
  report.log10_mse =
      report.mse == 0.0 ? -std::numeric_limits<double>::infinity() : std::log10(report.mse);
  for (const auto& [level, c] : report.per_level_counts)
    report.per_level_accuracy[level] = pct(c.correct, c.total);
  return report;
}

double round_to(double value, int decimals) noexcept {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

std::vector<std::string> consistency_check(const ScoreReport& report) {
  std::vector<std::string> violations;
  constexpr double kHalfUlp2dp = 0.005;  // percentages are reported to 2 decimals
  constexpr double kEps = 1e-9;

  const auto check_range = [&](const char* name, double v) {
    if (!(v >= -kEps && v <= 100.0 + kEps))
      violations.push_back(std::string(name) + " is outside [0, 100]");
  };
  check_range("correct_pct", report.correct_pct);
  check_range("correct_form_pct", report.correct_form_pct);
  check_range("miscalc_pct", report.miscalc_pct);
  check_range("misc_among_correct_form_pct", report.misc_among_correct_form_pct);
  for (const auto& [level, v] : report.per_level_accuracy)
    check_range(bench::to_string(level), v);

  if (report.n == 0) {
    violations.push_back("n is zero");
    return violations;
  }
  const double n = static_cast<double>(report.n);
  const double count_slack = kHalfUlp2dp * n / 100.0 + kEps;

  const auto implied = [&](const char* name, double pct_value, double whole,
                           double slack) -> std::optional<long> {
    const double raw = pct_value * whole / 100.0;
    const double r = std::round(raw);
    if (std::fabs(raw - r) > slack) {
      violations.push_back(std::string(name) + " does not correspond to an integer count");
      return std::nullopt;
    }
    return static_cast<long>(r);
  };
  const auto correct = implied("correct_pct", report.correct_pct, n, count_slack);
  const auto form = implied("correct_form_pct", report.correct_form_pct, n, count_slack);
  const auto miscalc = implied("miscalc_pct", report.miscalc_pct, n, count_slack);

  if (correct && form && miscalc && *correct + *miscalc != *form) {
    violations.push_back("correct + miscalc != formulation-correct (" + std::to_string(*correct) +
                         " + " + std::to_string(*miscalc) + " != " + std::to_string(*form) + ")");
  }
  if (form && *form > 0) {
    const double f = static_cast<double>(*form);
    const auto misc_among = implied("misc_among_correct_form_pct",
                                    report.misc_among_correct_form_pct, f,
                                    kHalfUlp2dp * f / 100.0 + kEps);
    if (misc_among && correct && *correct != *form - *misc_among) {
      violations.push_back("correct != formulation-correct - MisC count (" +
                           std::to_string(*correct) + " != " + std::to_string(*form) + " - " +
                           std::to_string(*misc_among) + ")");
    }
    if (miscalc) {
      const double expected = 100.0 * static_cast<double>(*miscalc) / f;
      if (std::fabs(expected - report.misc_among_correct_form_pct) > kHalfUlp2dp + kEps)
        violations.push_back("MisC differs from miscalc / formulation-correct");
    }
  }

  if (!report.per_level_accuracy.empty()) {
    bool equal_sized = true;
    std::optional<std::size_t> size;
    for (const auto& [_, c] : report.per_level_counts) {
      if (size && *size != c.total) equal_sized = false;
      size = c.total;
    }
    if (equal_sized && (report.per_level_counts.empty() ||
                        report.per_level_counts.size() == report.per_level_accuracy.size())) {
      double sum = 0.0;
      for (const auto& [_, v] : report.per_level_accuracy) sum += v;
      const double mean = sum / static_cast<double>(report.per_level_accuracy.size());
      if (std::fabs(mean - report.correct_pct) > kHalfUlp2dp + kEps)
        violations.push_back("overall accuracy differs from the mean of per-level accuracies");
    }
  }
  return violations;
}

std::string to_json(const ScoreReport& report) {
  ordered_json j;
  j["model_id"] = report.model_id;
  j["mode"] = report.mode;
  j["n"] = report.n;
  j["correct_count"] = report.correct_count;
  j["formulation_correct_count"] = report.formulation_correct_count;
  j["miscalc_count"] = report.miscalc_count;
  j["refused_count"] = report.refused_count;
  j["correct_pct"] = report.correct_pct;
  j["correct_form_pct"] = report.correct_form_pct;
  j["miscalc_pct"] = report.miscalc_pct;
  j["misc_among_correct_form_pct"] = report.misc_among_correct_form_pct;
  j["mse"] = report.mse;
  if (std::isfinite(report.log10_mse)) j["log10_mse"] = report.log10_mse;
  else j["log10_mse"] = "-inf";
  j["per_level_accuracy"] = ordered_json::object();
  j["per_level_counts"] = ordered_json::object();
  for (const auto& [level, v] : report.per_level_accuracy) j["per_level_accuracy"][bench::to_string(level)] = v;
  for (const auto& [level, c] : report.per_level_counts)
    j["per_level_counts"][bench::to_string(level)] = {{"correct", c.correct}, {"total", c.total}};
  return j.dump(2) + "\n";
}

ScoreReport score_from_json(std::string_view json_text) {
  ScoreReport r;
  try {
    auto j = json::parse(json_text);
    r.model_id = j.at("model_id").get<std::string>();
    r.mode = j.value("mode", std::string{});
    r.n = j.at("n").get<std::size_t>();
    r.correct_count = j.value("correct_count", std::size_t{0});
    r.formulation_correct_count = j.value("formulation_correct_count", std::size_t{0});
    r.miscalc_count = j.value("miscalc_count", std::size_t{0});
    r.refused_count = j.value("refused_count", std::size_t{0});
    r.correct_pct = j.at("correct_pct").get<double>();
    r.correct_form_pct = j.at("correct_form_pct").get<double>();
    r.miscalc_pct = j.at("miscalc_pct").get<double>();
    r.misc_among_correct_form_pct = j.at("misc_among_correct_form_pct").get<double>();
    r.mse = j.at("mse").get<double>();
    const auto& l = j.at("log10_mse");
    r.log10_mse = l.is_number() ? l.get<double>() : -std::numeric_limits<double>::infinity();
    if (j.contains("per_level_accuracy")) {
      for (const auto& [name, v] : j["per_level_accuracy"].items()) {
        auto level = bench::parse_level(name);
        if (!level) throw ValidationError("unknown level " + name + " in score file");
        r.per_level_accuracy[*level] = v.get<double>();
      }
    }
    if (j.contains("per_level_counts")) {
      for (const auto& [name, v] : j["per_level_counts"].items()) {
        auto level = bench::parse_level(name);
        if (!level) throw ValidationError("unknown level " + name + " in score file");
        r.per_level_counts[*level] = {v.at("correct").get<std::size_t>(),
                                      v.at("total").get<std::size_t>()};
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad score file: ") + e.what());
  }
  return r;
}

}  // namespace raguav::evaluator
