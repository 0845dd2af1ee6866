// raguav: ingest a corpus, build a vector store, run the benchmark against a
// chat model and score the results.

#include <cstdlib>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "raguav/commands.hpp"
#include "raguav/error.hpp"

using namespace raguav;

namespace {

void add_embedder_flags(CLI::App* cmd, embedding::EmbedderSpec& spec, std::string& kind) {
  cmd->add_option("--embedder", kind, "offline, openai or ollama")->default_val("offline");
  cmd->add_option("--embed-model", spec.model_id, "embedding model id")->default_val("trigram-hash");
  cmd->add_option("--dimension", spec.dimension, "vector dimension")->default_val(256);
  cmd->add_option("--embed-endpoint", spec.endpoint, "base URL of the embedding provider");
  cmd->add_option("--embed-key-env", spec.credential_env, "env var holding the embedding API key");
  cmd->add_option("--embed-in-flight", spec.max_in_flight, "concurrent embedding requests")
      ->default_val(4);
}

template <typename T, typename Parse>
T parse_enum(const std::string& text, Parse parse, const char* what) {
  auto parsed = parse(text);
  if (!parsed) throw ConfigError(std::string("unknown ") + what + " '" + text + "'");
  return *parsed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RAG-UAV benchmark harness"};
  app.require_subcommand(1);

  commands::IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "split LaTeX sources into page chunks");
  ingest_cmd->add_option("inputs", ingest.inputs, "LaTeX source files")->required();
  ingest_cmd->add_option("--delimiter", ingest.delimiter, "page delimiter line")
      ->default_val(std::string(corpus::kDefaultPageDelimiter));
  ingest_cmd->add_option("--out", ingest.out, "chunk file (JSON lines)")->required();

  commands::EmbedOptions embed;
  std::string embed_kind;
  auto* embed_cmd = app.add_subcommand("embed", "embed chunks into a flat vector store");
  embed_cmd->add_option("--chunks", embed.chunks, "chunk file from ingest")->required();
  embed_cmd->add_option("--out", embed.out, "store file")->required();
  add_embedder_flags(embed_cmd, embed.embedder, embed_kind);

  commands::QueryOptions query;
  auto* query_cmd = app.add_subcommand("query", "print the top-k chunks for a question");
  query_cmd->add_option("--store", query.store, "store file")->required();
  query_cmd->add_option("--k", query.k, "number of chunks")->default_val(query.k);
  query_cmd->add_option("question", query.question, "question text")->required();

  commands::RunConfig run;
  std::string mode_text = "rag";
  std::string dialect_text = "openai";
  auto* run_cmd = app.add_subcommand("run-bench", "answer every benchmark question");
  run_cmd->add_option("--mode", mode_text, "rag or no-rag")->default_val("rag");
  run_cmd->add_option("--k", run.k, "retrieved chunks per question")->default_val(run.k);
  run_cmd->add_option("--model", run.model_id, "chat model id")->required();
  run_cmd->add_option("--dialect", dialect_text, "openai or ollama")->default_val("openai");
  run_cmd->add_option("--endpoint", run.endpoint, "base URL of the chat provider");
  run_cmd->add_option("--key-env", run.credential_env, "env var holding the chat API key");
  run_cmd->add_option("--replay", run.replay, "answer from a recorded transcript");
  run_cmd->add_option("--transcript", run.transcript, "record every call to this file");
  run_cmd->add_option("--bench", run.bench, "benchmark file")->required();
  run_cmd->add_option("--store", run.store, "store file (rag mode)");
  run_cmd->add_option("--out", run.out, "run file (JSON lines)")->required();
  run_cmd->add_option("--temperature", run.temperature)->default_val(run.temperature);
  run_cmd->add_option("--max-tokens", run.max_tokens)->default_val(run.max_tokens);
  run_cmd->add_option("--in-flight", run.max_in_flight, "concurrent questions")
      ->default_val(run.max_in_flight);

  commands::ScoreOptions score;
  std::string overrides_path;
  auto* score_cmd = app.add_subcommand("score", "score a run against the benchmark");
  score_cmd->add_option("--run", score.run, "run file")->required();
  score_cmd->add_option("--bench", score.bench, "benchmark file")->required();
  score_cmd->add_option("--overrides", overrides_path, "formulation adjudication file");
  score_cmd->add_option("--out", score.out, "score file (JSON)");

  commands::ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "tabulate one or more score files");
  report_cmd->add_option("scores", report.scores, "score files")->required();
  report_cmd->add_option("--out", report.out, "output prefix for .txt, .csv and .plot.csv");

  commands::OracleOptions oracle_opts;
  auto* oracle_cmd = app.add_subcommand("oracle", "evaluate a closed-form formula");
  oracle_cmd->add_option("formula", oracle_opts.formula_id, "formula id")->required();
  oracle_cmd->add_option("--param,-p", oracle_opts.params, "name=value[unit]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*ingest_cmd) {
      commands::cmd_ingest(ingest, std::cout);
    } else if (*embed_cmd) {
      embed.embedder.kind =
          parse_enum<embedding::ProviderKind>(embed_kind, embedding::parse_provider_kind, "embedder");
      commands::cmd_embed(embed, std::cout);
    } else if (*query_cmd) {
      commands::cmd_query(query, std::cout);
    } else if (*run_cmd) {
      run.mode = parse_enum<pipeline::Mode>(mode_text, pipeline::parse_mode, "mode");
      run.dialect = parse_enum<llm::Dialect>(dialect_text, llm::parse_dialect, "dialect");
      commands::cmd_run_bench(run, std::cout);
    } else if (*score_cmd) {
      if (!overrides_path.empty()) score.overrides = overrides_path;
      commands::cmd_score(score, std::cout);
    } else if (*report_cmd) {
      commands::cmd_report(report, std::cout);
    } else if (*oracle_cmd) {
      commands::cmd_oracle(oracle_opts, std::cout);
    }
  } catch (const Error& e) {
    std::cerr << "raguav: " << to_string(e.kind()) << " error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "raguav: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
