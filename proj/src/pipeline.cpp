#include "raguav/pipeline.hpp"

#include <json.hpp>

#include "raguav/concurrency.hpp"
#include "raguav/io.hpp"

namespace raguav::pipeline {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(Mode mode) noexcept { return mode == Mode::rag ? "rag" : "no_rag"; }

std::optional<Mode> parse_mode(std::string_view name) noexcept {
  if (name == "rag") return Mode::rag;
  if (name == "no_rag" || name == "no-rag") return Mode::no_rag;
  return std::nullopt;
}

std::string build_prompt(std::span<const std::string> contexts, std::string_view question) {
  std::string out;
  out += kPromptHeaderLine1;
  out += '\n';
  out += kPromptHeaderLine2;
  out += "\n\n";
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    if (i > 0) out += "\n\n";
    out += contexts[i];
  }
  out += "\n\nQuestion: ";
  out += question;
  return out;
}

PipelineAnswer answer_question(const bench::BenchQuestion& question, const RunOptions& options,
                               const Services& services) {
  PipelineAnswer answer;
  answer.question_id = question.id;
  answer.model_id = options.model_id;
  answer.mode = options.mode;
  try {
    if (services.client == nullptr) throw ConfigError("no chat client configured");
    std::vector<std::string> contexts;
    if (options.mode == Mode::rag) {
      if (services.embedder == nullptr) throw ConfigError("rag mode needs an embedder");
      if (services.store == nullptr || services.store->empty())
        throw StoreError("rag mode needs a built, non-empty store");
      const auto query = services.embedder->embed_one(question.prompt_text);
      answer.retrieved = services.store->top_k(query, options.k);
      for (const auto& r : answer.retrieved) contexts.push_back(r.payload);
    }
    answer.prompt_text = build_prompt(contexts, question.prompt_text);

    llm::ChatRequest request;
    request.model_id = options.model_id;
    request.messages.push_back({llm::Role::user, answer.prompt_text});
    request.temperature = options.temperature;
    request.max_tokens = options.max_tokens;
    auto response = services.client->chat(request);
    answer.response_text = std::move(response.text);
    answer.latency_ms = response.latency_ms;
  } catch (const QuestionError&) {
    throw;
  } catch (const Error& e) {
    throw QuestionError(question.id, e.kind(), e.what());
  }
  return answer;
}

std::vector<PipelineAnswer> run_benchmark(const bench::BenchSet& bench, const RunOptions& options,
                                          const Services& services) {
  std::vector<PipelineAnswer> answers(bench.questions.size());
  bounded_parallel_for(bench.questions.size(), options.max_in_flight, [&](std::size_t i) {
    const auto& q = bench.questions[i];
    try {
      answers[i] = answer_question(q, options, services);
    } catch (const Error& e) {
      PipelineAnswer failed;
      failed.question_id = q.id;
      failed.model_id = options.model_id;
      failed.mode = options.mode;
      failed.error = AnswerError{e.kind(), e.what()};
      answers[i] = std::move(failed);
    }
  });
  return answers;
}

namespace {

ErrorKind parse_error_kind(std::string_view name) {
  for (auto k : {ErrorKind::ingestion, ErrorKind::validation, ErrorKind::provider,
                 ErrorKind::protocol, ErrorKind::config, ErrorKind::missing_transcript,
                 ErrorKind::store, ErrorKind::format, ErrorKind::degenerate_vector,
                 ErrorKind::oracle, ErrorKind::io}) {
    if (name == to_string(k)) return k;
  }
  return ErrorKind::provider;
}

}  // namespace

std::string to_json_line(const PipelineAnswer& answer) {
  ordered_json j;
  j["question_id"] = answer.question_id;
  j["model_id"] = answer.model_id;
  j["mode"] = to_string(answer.mode);
  j["retrieved"] = ordered_json::array();
  for (const auto& r : answer.retrieved) {
    ordered_json jr;
    jr["chunk_id"] = r.chunk_id;
    jr["score"] = r.score;
    jr["rank"] = r.rank;
    jr["payload"] = r.payload;
    j["retrieved"].push_back(std::move(jr));
  }
  j["prompt_text"] = answer.prompt_text;
  j["response_text"] = answer.response_text;
  j["latency_ms"] = answer.latency_ms;
  if (answer.error) j["error"] = {{"kind", to_string(answer.error->kind)}, {"message", answer.error->message}};
  return j.dump();
}

PipelineAnswer from_json_line(std::string_view line) {
  auto j = json::parse(line);
  PipelineAnswer a;
  a.question_id = j.at("question_id").get<std::string>();
  a.model_id = j.value("model_id", std::string{});
  auto mode = parse_mode(j.at("mode").get<std::string>());
  if (!mode) throw ValidationError("unknown mode in run line for " + a.question_id);
  a.mode = *mode;
  for (const auto& jr : j.at("retrieved")) {
    a.retrieved.push_back({jr.at("chunk_id").get<std::string>(), jr.at("score").get<double>(),
                           jr.at("rank").get<std::size_t>(), jr.value("payload", std::string{})});
  }
  a.prompt_text = j.at("prompt_text").get<std::string>();
  a.response_text = j.at("response_text").get<std::string>();
  a.latency_ms = j.value("latency_ms", std::int64_t{0});
  if (j.contains("error") && j["error"].is_object()) {
    a.error = AnswerError{parse_error_kind(j["error"].value("kind", "provider")),
                          j["error"].value("message", std::string{})};
  }
  return a;
}

std::string to_jsonl(std::span<const PipelineAnswer> answers) {
  std::string out;
  for (const auto& a : answers) {
    out += to_json_line(a);
    out += '\n';
  }
  return out;
}

std::vector<PipelineAnswer> parse_run(std::string_view contents) {
  std::vector<PipelineAnswer> answers;
  for (const auto& line : io::split_lines(contents)) {
    if (line.text.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      answers.push_back(from_json_line(line.text));
    } catch (const json::exception& e) {
      throw FormatError(std::string("bad run line: ") + e.what(), line.offset);
    }
  }
  return answers;
}

std::vector<PipelineAnswer> load_run(const std::filesystem::path& path) {
  return parse_run(io::read_file(path));
}

}  // namespace raguav::pipeline
