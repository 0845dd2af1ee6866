#include "raguav/embedding.hpp"

#include <cmath>
#include <cstdint>

#include <json.hpp>

#include "raguav/concurrency.hpp"
#include "raguav/error.hpp"

namespace raguav::embedding {

using nlohmann::json;

const char* to_string(ProviderKind kind) noexcept {
  switch (kind) {
    case ProviderKind::remote_openai_dialect: return "remote_openai_dialect";
    case ProviderKind::remote_ollama_dialect: return "remote_ollama_dialect";
    case ProviderKind::offline_hash: return "offline_hash";
  }
  return "unknown";
}

std::optional<ProviderKind> parse_provider_kind(std::string_view name) noexcept {
  if (name == "remote_openai_dialect" || name == "openai") return ProviderKind::remote_openai_dialect;
  if (name == "remote_ollama_dialect" || name == "ollama") return ProviderKind::remote_ollama_dialect;
  if (name == "offline_hash" || name == "offline") return ProviderKind::offline_hash;
  return std::nullopt;
}

std::string EmbedderSpec::id() const {
  return std::string(to_string(kind)) + ":" + model_id + ":" + std::to_string(dimension);
}

void EmbedderSpec::validate() const {
  if (dimension == 0) throw ConfigError("embedder dimension must be positive");
  if (model_id.empty()) throw ConfigError("embedder model_id must be non-empty");
  if (kind != ProviderKind::offline_hash && endpoint.empty())
    throw ConfigError("remote embedder '" + model_id + "' needs an endpoint");
}

std::vector<double> normalize(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw DegenerateVectorError("vector has a non-finite component");
    sq += x * x;
  }
  if (sq == 0.0) throw DegenerateVectorError("cannot normalize an all-zero vector");
  const double norm = std::sqrt(sq);
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= norm;
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  const auto n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

Embedder::Embedder(EmbedderSpec spec, Preprocessor preprocess)
    : spec_(std::move(spec)), preprocess_(std::move(preprocess)) {
  spec_.validate();
}

std::vector<EmbeddingVector> Embedder::embed(std::span<const std::string> texts) const {
  if (texts.empty()) throw ValidationError("embed called with no texts");
  std::vector<std::vector<double>> raw;
  if (preprocess_) {
    std::vector<std::string> prepared;
    prepared.reserve(texts.size());
    for (const auto& t : texts) prepared.push_back(preprocess_(t));
    raw = embed_raw(prepared);
  } else {
    raw = embed_raw(texts);
  }
  if (raw.size() != texts.size())
    throw ProtocolError("embedder returned " + std::to_string(raw.size()) + " vectors for " +
                        std::to_string(texts.size()) + " texts");

  std::vector<EmbeddingVector> out;
  out.reserve(raw.size());
  for (auto& values : raw) {
    if (values.size() != spec_.dimension)
      throw ProtocolError("embedding has " + std::to_string(values.size()) +
                          " values, spec " + spec_.id() + " declares " +
                          std::to_string(spec_.dimension));
    out.push_back({normalize(values), spec_.id()});
  }
  return out;
}

EmbeddingVector Embedder::embed_one(std::string_view text) const {
  std::string owned(text);
  return std::move(embed(std::span<const std::string>(&owned, 1)).front());
}

// ---------------------------------------------------------------------------

namespace {

// 64-bit FNV-1a; std::hash is not stable across implementations.
std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

OfflineHashEmbedder::OfflineHashEmbedder(EmbedderSpec spec, Preprocessor preprocess)
    : Embedder(std::move(spec), std::move(preprocess)) {}

std::vector<double> OfflineHashEmbedder::counts(std::string_view text) const {
  std::string lower(text);
  for (char& c : lower) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  const auto dim = spec().dimension;
  std::vector<double> buckets(dim, 0.0);
  if (lower.size() < 3) {
    // Too short for a trigram: the whole string is the only feature.
    buckets[fnv1a(lower) % dim] += 1.0;
    return buckets;
  }
  for (std::size_t i = 0; i + 3 <= lower.size(); ++i) {
    buckets[fnv1a(std::string_view(lower).substr(i, 3)) % dim] += 1.0;
  }
  return buckets;
}

std::vector<std::vector<double>> OfflineHashEmbedder::embed_raw(
    std::span<const std::string> texts) const {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(counts(t));
  return out;
}

// ---------------------------------------------------------------------------

RemoteEmbedder::RemoteEmbedder(EmbedderSpec spec, std::shared_ptr<http::Transport> transport,
                               http::RetryPolicy retry, Preprocessor preprocess)
    : Embedder(std::move(spec), std::move(preprocess)),
      transport_(std::move(transport)),
      retry_(retry) {
  if (!transport_) throw ConfigError("remote embedder needs a transport");
}

namespace {

std::vector<double> parse_vector(const json& j, const char* where) {
  if (!j.is_array()) throw ProtocolError(std::string(where) + " is not an array");
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw ProtocolError(std::string(where) + " holds a non-number");
    v.push_back(x.get<double>());
  }
  return v;
}

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("response is not JSON: ") + e.what());
  }
}

}  // namespace

std::vector<std::vector<double>> RemoteEmbedder::embed_openai_batch(
    std::span<const std::string> batch) const {
  json req = {{"model", spec().model_id}, {"input", json::array()}};
  for (const auto& t : batch) req["input"].push_back(t);
  auto resp = http::post_with_retries(*transport_, "/v1/embeddings", req.dump(),
                                      http::bearer_headers(spec().credential_env), retry_);
  auto body = parse_body(resp.body);
  if (!body.contains("data") || !body["data"].is_array())
    throw ProtocolError("embeddings response lacks a data array");
  const auto& data = body["data"];
  if (data.size() != batch.size())
    throw ProtocolError("embeddings response has " + std::to_string(data.size()) +
                        " items for a batch of " + std::to_string(batch.size()));

  std::vector<std::vector<double>> out(batch.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::size_t slot = i;
    if (data[i].contains("index")) slot = data[i]["index"].get<std::size_t>();
    if (slot >= out.size() || !out[slot].empty())
      throw ProtocolError("embeddings response has a bad or repeated index");
    if (!data[i].contains("embedding")) throw ProtocolError("data item lacks an embedding");
    out[slot] = parse_vector(data[i]["embedding"], "data[i].embedding");
  }
  return out;
}

std::vector<double> RemoteEmbedder::embed_ollama_one(const std::string& text) const {
  json req = {{"model", spec().model_id}, {"prompt", text}};
  auto resp = http::post_with_retries(*transport_, "/api/embeddings", req.dump(),
                                      http::bearer_headers(spec().credential_env), retry_);
  auto body = parse_body(resp.body);
  if (!body.contains("embedding")) throw ProtocolError("ollama response lacks an embedding");
  return parse_vector(body["embedding"], "embedding");
}

std::vector<std::vector<double>> RemoteEmbedder::embed_raw(
    std::span<const std::string> texts) const {
  std::vector<std::vector<double>> out(texts.size());
  if (spec().kind == ProviderKind::remote_openai_dialect) {
    const std::size_t batches = (texts.size() + kRemoteBatchSize - 1) / kRemoteBatchSize;
    bounded_parallel_for(batches, spec().max_in_flight, [&](std::size_t b) {
      const auto begin = b * kRemoteBatchSize;
      const auto len = std::min(kRemoteBatchSize, texts.size() - begin);
      auto vecs = embed_openai_batch(texts.subspan(begin, len));
      for (std::size_t i = 0; i < len; ++i) out[begin + i] = std::move(vecs[i]);
    });
  } else {
    bounded_parallel_for(texts.size(), spec().max_in_flight,
                         [&](std::size_t i) { out[i] = embed_ollama_one(texts[i]); });
  }
  return out;
}

std::unique_ptr<Embedder> make_embedder(const EmbedderSpec& spec, Preprocessor preprocess) {
  spec.validate();
  if (spec.kind == ProviderKind::offline_hash)
    return std::make_unique<OfflineHashEmbedder>(spec, std::move(preprocess));
  return std::make_unique<RemoteEmbedder>(spec, http::make_transport(spec.endpoint),
                                          http::RetryPolicy{}, std::move(preprocess));
}

std::vector<EmbeddingVector> embed_texts(const EmbedderSpec& spec,
                                         std::span<const std::string> texts) {
  return make_embedder(spec)->embed(texts);
}

}  // namespace raguav::embedding
