#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "raguav/bench.hpp"
#include "raguav/embedding.hpp"
#include "raguav/error.hpp"
#include "raguav/llm_client.hpp"
#include "raguav/vectorstore.hpp"

namespace raguav::pipeline {

enum class Mode { rag, no_rag };

const char* to_string(Mode mode) noexcept;
std::optional<Mode> parse_mode(std::string_view name) noexcept;  // accepts no_rag and no-rag

inline constexpr std::string_view kPromptHeaderLine1 =
    "To answer the questions, use only the documents provided.";
inline constexpr std::string_view kPromptHeaderLine2 =
    "Formulations are provided for all the questions in the provided documents; however, to "
    "calculate the result, you may use your calculation skills.";

inline constexpr std::size_t kDefaultTopK = 4;
inline constexpr std::size_t kDefaultInFlight = 4;

/// Header lines, blank line, contexts separated by blank lines, blank line,
/// then "Question: <question>". No trailing newline.
std::string build_prompt(std::span<const std::string> contexts, std::string_view question);

struct AnswerError {
  ErrorKind kind = ErrorKind::provider;
  std::string message;

  bool operator==(const AnswerError&) const = default;
};

struct PipelineAnswer {
  std::string question_id;
  std::string model_id;
  Mode mode = Mode::rag;
  std::vector<vectorstore::RetrievalResult> retrieved;  // rank order; empty for no_rag
  std::string prompt_text;
  std::string response_text;
  std::int64_t latency_ms = 0;
  std::optional<AnswerError> error;  // set when this question failed

  bool operator==(const PipelineAnswer&) const = default;
};

/// A failure inside answer_question, tagged with the question it belongs to.
class QuestionError : public Error {
 public:
  QuestionError(std::string question_id, ErrorKind kind, const std::string& what)
      : Error(kind, question_id + ": " + what), question_id_(std::move(question_id)) {}
  const std::string& question_id() const noexcept { return question_id_; }

 private:
  std::string question_id_;
};

struct RunOptions {
  Mode mode = Mode::rag;
  std::size_t k = kDefaultTopK;
  std::string model_id;
  double temperature = llm::kDefaultTemperature;
  int max_tokens = llm::kDefaultMaxTokens;
  std::size_t max_in_flight = kDefaultInFlight;
};

/// Shared read-only collaborators. embedder and store may be null in no_rag mode.
struct Services {
  const embedding::Embedder* embedder = nullptr;
  const vectorstore::FlatStore* store = nullptr;
  llm::ChatClient* client = nullptr;
};

/// Embed query, retrieve, assemble prompt, query the model. The template
/// and question go out as a single user message.
PipelineAnswer answer_question(const bench::BenchQuestion& question, const RunOptions& options,
                               const Services& services);

/// One answer per question in bench order, whatever the concurrency. A
/// failing question is recorded in its slot and the run continues.
std::vector<PipelineAnswer> run_benchmark(const bench::BenchSet& bench, const RunOptions& options,
                                          const Services& services);

std::string to_json_line(const PipelineAnswer& answer);
PipelineAnswer from_json_line(std::string_view line);

std::string to_jsonl(std::span<const PipelineAnswer> answers);
std::vector<PipelineAnswer> parse_run(std::string_view contents);
std::vector<PipelineAnswer> load_run(const std::filesystem::path& path);

}  // namespace raguav::pipeline
