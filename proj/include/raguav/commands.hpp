#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "raguav/corpus.hpp"
#include "raguav/embedding.hpp"
#include "raguav/evaluator.hpp"
#include "raguav/llm_client.hpp"
#include "raguav/pipeline.hpp"
#include "raguav/vectorstore.hpp"

// Implementations behind the `raguav` subcommands. Each writes its
// human-readable output to `out` and its artifacts to the given paths.
namespace raguav::commands {

struct IngestOptions {
  std::vector<std::filesystem::path> inputs;
  std::string delimiter{corpus::kDefaultPageDelimiter};
  std::filesystem::path out;
};

corpus::CorpusStats cmd_ingest(const IngestOptions& options, std::ostream& out);

struct EmbedOptions {
  std::filesystem::path chunks;
  embedding::EmbedderSpec embedder;
  std::filesystem::path out;
};

vectorstore::FlatStore cmd_embed(const EmbedOptions& options, std::ostream& out);

struct QueryOptions {
  std::filesystem::path store;
  std::string question;
  std::size_t k = pipeline::kDefaultTopK;
};

std::vector<vectorstore::RetrievalResult> cmd_query(const QueryOptions& options, std::ostream& out);

struct RunConfig {
  pipeline::Mode mode = pipeline::Mode::rag;
  std::size_t k = pipeline::kDefaultTopK;
  std::string model_id;
  llm::Dialect dialect = llm::Dialect::openai;
  std::string endpoint;
  std::string credential_env;
  std::filesystem::path replay;      // replay transcript; replaces the HTTP client
  std::filesystem::path transcript;  // record every call here when set
  std::filesystem::path bench;
  std::filesystem::path store;  // required for rag mode
  std::filesystem::path out;
  double temperature = llm::kDefaultTemperature;
  int max_tokens = llm::kDefaultMaxTokens;
  std::size_t max_in_flight = pipeline::kDefaultInFlight;

  /// Throws ConfigError for unusable combinations and IoError for missing files.
  void validate() const;
  std::string to_json(std::string_view embedder_spec_id = {}) const;
};

/// Path the run config is persisted to, beside the run file.
std::filesystem::path config_path_for(const std::filesystem::path& run_file);

std::vector<pipeline::PipelineAnswer> cmd_run_bench(const RunConfig& config, std::ostream& out);

struct ScoreOptions {
  std::filesystem::path run;
  std::filesystem::path bench;
  std::optional<std::filesystem::path> overrides;
  std::filesystem::path out;
};

evaluator::ScoreReport cmd_score(const ScoreOptions& options, std::ostream& out);

struct ReportOptions {
  std::vector<std::filesystem::path> scores;
  std::filesystem::path out;  // prefix: <out>.txt, <out>.csv, <out>.plot.csv
};

struct ReportPaths {
  std::filesystem::path table;
  std::filesystem::path csv;
  std::filesystem::path plot;
};

ReportPaths report_paths(const std::filesystem::path& prefix);

void cmd_report(const ReportOptions& options, std::ostream& out);

struct OracleOptions {
  std::string formula_id;
  std::vector<std::string> params;  // "name=value[unit]"
};

double cmd_oracle(const OracleOptions& options, std::ostream& out);

}  // namespace raguav::commands
