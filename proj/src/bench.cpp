#include "raguav/bench.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "raguav/error.hpp"
#include "raguav/io.hpp"
#include "raguav/oracle.hpp"

namespace raguav::bench {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(Level level) noexcept {
  switch (level) {
    case Level::Basic: return "Basic";
    case Level::Intermediate: return "Intermediate";
    case Level::Advanced: return "Advanced";
    case Level::Expert: return "Expert";
  }
  return "Basic";
}

std::optional<Level> parse_level(std::string_view name) noexcept {
  for (auto l : kLevels) {
    if (name == to_string(l)) return l;
  }
  return std::nullopt;
}

const BenchQuestion* BenchSet::find(std::string_view id) const noexcept {
  for (const auto& q : questions) {
    if (q.id == id) return &q;
  }
  return nullptr;
}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

// Decodes one question, appending problems to `errors` rather than throwing
// so that a file with several bad questions is reported in one pass.
std::optional<BenchQuestion> decode_question(const json& j, std::size_t index,
                                             std::vector<std::string>& errors) {
  std::string label = "question #" + std::to_string(index);
  if (!j.is_object()) {
    errors.push_back(label + ": not an object");
    return std::nullopt;
  }
  BenchQuestion q;
  if (j.contains("id") && j["id"].is_string()) {
    q.id = j["id"].get<std::string>();
    label = q.id;
  } else {
    errors.push_back(label + ": missing id");
  }
  const auto before = errors.size();

  auto get_string = [&](const char* key, std::string& out, bool required) {
    if (!j.contains(key)) {
      if (required) errors.push_back(label + ": missing " + key);
      return;
    }
    if (!j[key].is_string()) {
      errors.push_back(label + ": " + key + " must be a string");
      return;
    }
    out = j[key].get<std::string>();
  };
  auto get_int = [&](const char* key, int& out) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
      errors.push_back(label + ": missing integer " + key);
      return;
    }
    out = j[key].get<int>();
  };

  std::string level;
  get_string("level", level, true);
  if (!level.empty()) {
    if (auto l = parse_level(level)) {
      q.level = *l;
    } else {
      errors.push_back(label + ": unknown level '" + level + "'");
    }
  }
  get_string("prompt_text", q.prompt_text, true);
  get_string("gt_unit", q.gt_unit, false);
  get_string("formula_id", q.formula_id, false);

  if (!j.contains("ground_truth") || j["ground_truth"].is_null()) {
    errors.push_back(label + ": missing ground_truth");
  } else if (!j["ground_truth"].is_number()) {
    errors.push_back(label + ": ground_truth must be a number");
  } else {
    q.ground_truth = j["ground_truth"].get<double>();
  }

  if (j.contains("tolerance")) {
    const auto& t = j["tolerance"];
    auto kind = t.is_object() && t.contains("kind") && t["kind"].is_string()
                    ? parse_tolerance_kind(t["kind"].get<std::string>())
                    : std::nullopt;
    if (!kind || !t.contains("value") || !t["value"].is_number()) {
      errors.push_back(label + ": tolerance needs kind relative|absolute and a numeric value");
    } else {
      q.tolerance = {*kind, t["value"].get<double>()};
    }
  }

  get_int("num_variables", q.num_variables);
  get_int("num_nested_equations", q.num_nested_equations);

  if (j.contains("parameters")) {
    if (!j["parameters"].is_object()) {
      errors.push_back(label + ": parameters must be an object");
    } else {
      for (const auto& [name, p] : j["parameters"].items()) {
        if (!p.is_object() || !p.contains("value") || !p["value"].is_number()) {
          errors.push_back(label + ": parameter " + name + " needs a numeric value");
          continue;
        }
        q.parameters[name] = {p["value"].get<double>(), p.value("unit", std::string{})};
      }
    }
  }

  if (j.contains("formula_keywords") && j["formula_keywords"].is_array()) {
    for (const auto& k : j["formula_keywords"]) {
      if (k.is_string()) q.formula_keywords.push_back(k.get<std::string>());
      else errors.push_back(label + ": formula_keywords must be strings");
    }
  }

  if (errors.size() != before) return std::nullopt;
  return q;
}

}  // namespace

std::vector<std::string> structural_errors(const BenchSet& bench) {
  std::vector<std::string> errors;
  if (bench.version.empty()) errors.push_back("bench version is required");
  std::set<std::string> ids;
  std::map<Level, std::size_t> per_level;
  for (const auto& q : bench.questions) {
    if (q.id.empty()) errors.push_back("question with empty id");
    if (!ids.insert(q.id).second) errors.push_back(q.id + ": duplicate id");
    if (!std::isfinite(q.ground_truth)) errors.push_back(q.id + ": ground_truth is not finite");
    if (!(q.tolerance.value > 0.0)) errors.push_back(q.id + ": tolerance value must be > 0");
    if (q.num_variables < 1) errors.push_back(q.id + ": num_variables must be >= 1");
    if (q.num_nested_equations < 1) errors.push_back(q.id + ": num_nested_equations must be >= 1");
    if (q.formula_keywords.empty()) errors.push_back(q.id + ": formula_keywords is empty");
    if (q.prompt_text.empty()) errors.push_back(q.id + ": prompt_text is empty");
    if (q.has_formula() && oracle::default_registry().find(q.formula_id) == nullptr)
      errors.push_back(q.id + ": unknown formula_id '" + q.formula_id + "'");
    ++per_level[q.level];
  }
  if (bench.canonical) {
    if (bench.questions.size() != kCanonicalQuestionCount)
      errors.push_back("canonical bench needs " + std::to_string(kCanonicalQuestionCount) +
                       " questions, found " + std::to_string(bench.questions.size()));
    for (auto l : kLevels) {
      if (per_level[l] != kCanonicalPerLevel)
        errors.push_back(std::string("canonical bench needs ") +
                         std::to_string(kCanonicalPerLevel) + " " + to_string(l) +
                         " questions, found " + std::to_string(per_level[l]));
    }
  }
  return errors;
}

std::vector<std::string> ground_truth_errors(const BenchSet& bench) {
  std::vector<std::string> errors;
  for (const auto& q : bench.questions) {
    if (!q.has_formula()) continue;
    try {
      const double value = oracle::evaluate(q.formula_id, q.parameters);
      if (!exact_match(value, q.ground_truth, q.tolerance)) {
        errors.push_back(q.id + ": oracle " + q.formula_id + " gives " +
                         json(value).dump() + ", ground_truth is " +
                         json(q.ground_truth).dump());
      }
    } catch (const Error& e) {
      errors.push_back(q.id + ": " + e.what());
    }
  }
  return errors;
}

BenchSet parse_bench(std::string_view json_text, bool verify_ground_truth) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bench file is not valid JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("questions") || !root["questions"].is_array())
    throw ValidationError("bench file must be an object with a questions array");

  BenchSet bench;
  std::vector<std::string> errors;
  bench.name = root.value("name", std::string{});
  if (root.contains("version") && root["version"].is_string())
    bench.version = root["version"].get<std::string>();
  bench.canonical = root.value("canonical", false);

  std::size_t index = 0;
  for (const auto& jq : root["questions"]) {
    if (auto q = decode_question(jq, index++, errors)) bench.questions.push_back(std::move(*q));
  }
  if (errors.empty()) errors = structural_errors(bench);
  if (errors.empty() && verify_ground_truth) errors = ground_truth_errors(bench);
  if (!errors.empty()) throw ValidationError("invalid bench: " + join(errors));
  return bench;
}

BenchSet load_bench(const std::filesystem::path& path, bool verify_ground_truth) {
  return parse_bench(io::read_file(path), verify_ground_truth);
}

std::string serialize_bench(const BenchSet& bench) {
  ordered_json root;
  root["name"] = bench.name;
  root["version"] = bench.version;
  root["canonical"] = bench.canonical;
  root["questions"] = ordered_json::array();
  for (const auto& q : bench.questions) {
    ordered_json j;
    j["id"] = q.id;
    j["level"] = to_string(q.level);
    j["prompt_text"] = q.prompt_text;
    j["parameters"] = ordered_json::object();
    for (const auto& [name, p] : q.parameters) j["parameters"][name] = {{"value", p.value}, {"unit", p.unit}};
    j["ground_truth"] = q.ground_truth;
    j["gt_unit"] = q.gt_unit;
    j["tolerance"] = {{"kind", to_string(q.tolerance.kind)}, {"value", q.tolerance.value}};
    j["num_variables"] = q.num_variables;
    j["num_nested_equations"] = q.num_nested_equations;
    j["formula_id"] = q.formula_id;
    j["formula_keywords"] = q.formula_keywords;
    root["questions"].push_back(std::move(j));
  }
  return root.dump(2) + "\n";
}

void save_bench(const std::filesystem::path& path, const BenchSet& bench) {
  io::write_file(path, serialize_bench(bench));
}

std::map<Level, LevelStats> level_statistics(const BenchSet& bench) {
  std::map<Level, LevelStats> stats;
  for (const auto& q : bench.questions) {
    auto& s = stats[q.level];
    ++s.count;
    s.mean_variables += q.num_variables;
    s.mean_nested_equations += q.num_nested_equations;
  }
  for (auto& [_, s] : stats) {
    s.mean_variables /= static_cast<double>(s.count);
    s.mean_nested_equations /= static_cast<double>(s.count);
  }
  return stats;
}

std::vector<Diagnostic> validate_metadata(const BenchSet& bench) {
  std::vector<Diagnostic> out;
  if (bench.questions.empty()) return out;

  const auto stats = level_statistics(bench);
  std::optional<std::size_t> common;
  bool unequal = false;
  for (const auto& [_, s] : stats) {
    if (common && *common != s.count) unequal = true;
    common = s.count;
  }
  if (unequal)
    out.push_back({"", "levels have unequal sizes; overall accuracy is not the mean of levels"});

  if (bench.canonical) {
    for (auto l : kLevels) {
      auto it = stats.find(l);
      const std::size_t n = it == stats.end() ? 0 : it->second.count;
      if (n != kCanonicalPerLevel)
        out.push_back({"", std::string(to_string(l)) + " has " + std::to_string(n) +
                               " questions, canonical sets have " +
                               std::to_string(kCanonicalPerLevel)});
    }
    for (const auto& shape : kCanonicalShapes) {
      const auto* q = bench.find(shape.id);
      if (q == nullptr) {
        out.push_back({std::string(shape.id), "missing from canonical set"});
        continue;
      }
      if (q->level != shape.level || q->num_variables != shape.num_variables ||
          q->num_nested_equations != shape.num_nested_equations)
        out.push_back({q->id, "level/variables/nested equations differ from the published shape"});
    }
  }

  auto basic = stats.find(Level::Basic);
  auto expert = stats.find(Level::Expert);
  if (basic != stats.end() && expert != stats.end() &&
      expert->second.mean_nested_equations < basic->second.mean_nested_equations) {
    out.push_back({"", "Expert mean nested equations is below the Basic mean"});
  }
  return out;
}

}  // namespace raguav::bench
