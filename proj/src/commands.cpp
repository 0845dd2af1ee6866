#include "raguav/commands.hpp"

#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "raguav/bench.hpp"
#include "raguav/error.hpp"
#include "raguav/io.hpp"
#include "raguav/oracle.hpp"
#include "raguav/report.hpp"

namespace raguav::commands {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void require_file(const fs::path& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string(what) + " path is required");
  if (!fs::exists(path)) throw IoError(std::string(what) + " not found: " + path.string());
}

std::string first_line(std::string_view text, std::size_t max_len = 72) {
  auto line = text.substr(0, text.find('\n'));
  if (line.size() > max_len) return std::string(line.substr(0, max_len)) + "...";
  return std::string(line);
}

}  // namespace

corpus::CorpusStats cmd_ingest(const IngestOptions& options, std::ostream& out) {
  if (options.inputs.empty()) throw ValidationError("ingest needs at least one input file");
  if (options.out.empty()) throw ConfigError("ingest needs an output path");
  if (options.delimiter.empty()) throw ConfigError("page delimiter must be non-empty");

  const auto docs = corpus::load_documents(options.inputs);
  const auto chunks = corpus::chunk_documents(docs, corpus::PageDelimiter{options.delimiter});
  corpus::save_chunks(options.out, chunks);

  const auto stats = corpus::corpus_stats(chunks);
  for (const auto& [doc, count] : stats.per_document) out << doc << ": " << count << " chunks\n";
  out << "total: " << stats.total << " chunks from " << docs.size() << " documents -> "
      << options.out.string() << "\n";
  return stats;
}

vectorstore::FlatStore cmd_embed(const EmbedOptions& options, std::ostream& out) {
  require_file(options.chunks, "chunk file");
  if (options.out.empty()) throw ConfigError("embed needs an output path");
  const auto chunks = corpus::load_chunks(options.chunks);
  if (chunks.empty()) throw ValidationError("chunk file " + options.chunks.string() + " is empty");

  auto embedder = embedding::make_embedder(options.embedder);
  std::vector<std::string> texts;
  texts.reserve(chunks.size());
  for (const auto& c : chunks) texts.push_back(c.text);
  auto vectors = embedder->embed(texts);

  vectorstore::FlatStore store(options.embedder);
  std::vector<vectorstore::StoredEntry> entries;
  entries.reserve(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i)
    entries.push_back({chunks[i].chunk_id, std::move(vectors[i]), chunks[i].text});
  store.upsert(entries);
  store.save(options.out);
  out << "embedded " << store.size() << " chunks with " << options.embedder.id() << " -> "
      << options.out.string() << "\n";
  return store;
}

std::vector<vectorstore::RetrievalResult> cmd_query(const QueryOptions& options,
                                                    std::ostream& out) {
  require_file(options.store, "store file");
  if (options.question.empty()) throw ValidationError("query text is empty");
  if (options.k == 0) throw ConfigError("k must be >= 1");
  const auto store = vectorstore::FlatStore::load(options.store);
  if (!store.embedder()) throw ConfigError("store file does not record its embedder");
  auto embedder = embedding::make_embedder(*store.embedder());
  auto results = store.top_k(embedder->embed_one(options.question), options.k);
  for (const auto& r : results) {
    out << fmt::format("{:>3}  {:.6f}  {}  {}\n", r.rank, r.score, r.chunk_id,
                       first_line(r.payload));
  }
  return results;
}

void RunConfig::validate() const {
  if (model_id.empty()) throw ConfigError("--model is required");
  if (out.empty()) throw ConfigError("--out is required");
  require_file(bench, "bench file");
  if (mode == pipeline::Mode::rag) {
    require_file(store, "store file");
    if (k == 0) throw ConfigError("--k must be >= 1");
  }
  if (!replay.empty()) {
    require_file(replay, "replay transcript");
  } else if (endpoint.empty()) {
    throw ConfigError("either --endpoint or --replay is required");
  }
  if (max_in_flight == 0) throw ConfigError("in-flight limit must be >= 1");
}

std::string RunConfig::to_json(std::string_view embedder_spec_id) const {
  ordered_json j;
  j["mode"] = pipeline::to_string(mode);
  j["k"] = k;
  j["model_id"] = model_id;
  j["client"] = replay.empty() ? "http" : "replay";
  j["dialect"] = llm::to_string(dialect);
  j["endpoint"] = endpoint;
  j["credential_env"] = credential_env;
  j["replay"] = replay.string();
  j["transcript"] = transcript.string();
  j["bench"] = bench.string();
  j["store"] = store.string();
  j["embedder"] = std::string(embedder_spec_id);
  j["temperature"] = temperature;
  j["max_tokens"] = max_tokens;
  j["max_in_flight"] = max_in_flight;
  j["message_layout"] = "single user message: template + question";
  return j.dump(2) + "\n";
}

fs::path config_path_for(const fs::path& run_file) {
  return fs::path(run_file.string() + ".config.json");
}

std::vector<pipeline::PipelineAnswer> cmd_run_bench(const RunConfig& config, std::ostream& out) {
  config.validate();
  const auto bench = bench::load_bench(config.bench);

  std::optional<vectorstore::FlatStore> store;
  std::unique_ptr<embedding::Embedder> embedder;
  if (config.mode == pipeline::Mode::rag) {
    store = vectorstore::FlatStore::load(config.store);
    if (!store->embedder()) throw ConfigError("store file does not record its embedder");
    embedder = embedding::make_embedder(*store->embedder());
  }

  std::shared_ptr<llm::ChatClient> client;
  if (!config.replay.empty()) {
    client = llm::ReplayClient::from_file(config.replay);
  } else {
    client = std::make_shared<llm::HttpChatClient>(
        config.dialect, http::make_transport(config.endpoint), config.credential_env);
  }
  if (!config.transcript.empty())
    client = std::make_shared<llm::RecordingClient>(client, config.transcript);

  pipeline::RunOptions options;
  options.mode = config.mode;
  options.k = config.k;
  options.model_id = config.model_id;
  options.temperature = config.temperature;
  options.max_tokens = config.max_tokens;
  options.max_in_flight = config.max_in_flight;

  pipeline::Services services{embedder.get(), store ? &*store : nullptr, client.get()};
  auto answers = pipeline::run_benchmark(bench, options, services);

  io::write_file(config.out, pipeline::to_jsonl(answers));
  io::write_file(config_path_for(config.out), config.to_json(embedder ? embedder->spec().id() : ""));

  std::size_t failed = 0;
  for (const auto& a : answers) {
    if (a.error) {
      ++failed;
      out << "error: " << a.error->message << "\n";
    }
  }
  out << answers.size() - failed << " answered, " << failed << " failed -> "
      << config.out.string() << "\n";
  if (!answers.empty() && failed == answers.size()) {
    const auto& first = *answers.front().error;
    throw Error(first.kind, "every question failed; first: " + first.message);
  }
  return answers;
}

evaluator::ScoreReport cmd_score(const ScoreOptions& options, std::ostream& out) {
  require_file(options.run, "run file");
  const auto bench = bench::load_bench(options.bench);
  const auto answers = pipeline::load_run(options.run);
  if (answers.empty()) throw ValidationError("run file " + options.run.string() + " is empty");
  evaluator::Overrides overrides;
  if (options.overrides) {
    require_file(*options.overrides, "overrides file");
    overrides = evaluator::Overrides::load(*options.overrides);
  }
  const auto records = evaluator::make_records(answers, bench, overrides);
  auto report = evaluator::score_run(records, bench);
  if (!options.out.empty()) io::write_file(options.out, evaluator::to_json(report));
  out << fmt::format("{}: correct {:.2f}%  form {:.2f}%  miscalc {:.2f}%  MisC {:.2f}%  mse {}\n",
                     report.model_id, report.correct_pct, report.correct_form_pct,
                     report.miscalc_pct, report.misc_among_correct_form_pct,
                     report::format_g6(report.mse));
  return report;
}

ReportPaths report_paths(const fs::path& prefix) {
  const auto base = prefix.string();
  return {base + ".txt", base + ".csv", base + ".plot.csv"};
}

void cmd_report(const ReportOptions& options, std::ostream& out) {
  if (options.scores.empty()) throw ValidationError("report needs at least one score file");
  std::vector<evaluator::ScoreReport> reports;
  for (const auto& p : options.scores) {
    require_file(p, "score file");
    reports.push_back(evaluator::score_from_json(io::read_file(p)));
  }
  const auto table = report::render_table(reports);
  if (!options.out.empty()) {
    const auto paths = report_paths(options.out);
    io::write_file(paths.table, table);
    io::write_file(paths.csv, report::render_csv(reports));
    io::write_file(paths.plot, report::render_plot_data(reports));
  }
  out << table;
}

double cmd_oracle(const OracleOptions& options, std::ostream& out) {
  oracle::Params params;
  for (const auto& p : options.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ValidationError("--param expects name=value[unit], got '" + p + "'");
    const auto name = p.substr(0, eq);
    params[name] = units::parse_quantity(std::string_view(p).substr(eq + 1), name);
  }
  const double value = oracle::evaluate(options.formula_id, params);
  out << fmt::format("{} = {:.6g}\nfull precision: {:.17g}\n", options.formula_id, value, value);
  return value;
}

}  // namespace raguav::commands
