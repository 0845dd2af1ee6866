#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "raguav/http.hpp"

namespace raguav::embedding {

enum class ProviderKind { remote_openai_dialect, remote_ollama_dialect, offline_hash };

const char* to_string(ProviderKind kind) noexcept;
std::optional<ProviderKind> parse_provider_kind(std::string_view name) noexcept;

/// Dimensions of the two published embedding configurations.
inline constexpr std::size_t kMpnetDimension = 768;
inline constexpr std::size_t kAdaDimension = 1536;

inline constexpr std::size_t kRemoteBatchSize = 64;

struct EmbedderSpec {
  ProviderKind kind = ProviderKind::offline_hash;
  std::string model_id = "trigram-hash";
  std::size_t dimension = 256;
  std::string endpoint;        // remote kinds only
  std::string credential_env;  // name of the env var holding the API key
  std::size_t max_in_flight = 4;

  /// Stable identity written beside every vector: "<kind>:<model_id>:<dimension>".
  std::string id() const;
  void validate() const;  // throws ConfigError
};

struct EmbeddingVector {
  std::vector<double> values;
  std::string spec_id;
};

/// Unit-L2 copy of v. Throws DegenerateVectorError for all-zero or
/// non-finite input.
std::vector<double> normalize(std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b) noexcept;

/// Applied to every text before it is embedded; identity by default.
using Preprocessor = std::function<std::string(std::string_view)>;

class Embedder {
 public:
  virtual ~Embedder() = default;
  const EmbedderSpec& spec() const noexcept { return spec_; }

  /// One unit-normalized vector per text, in input order. Empty input is a
  /// ValidationError.
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const;

  EmbeddingVector embed_one(std::string_view text) const;

 protected:
  Embedder(EmbedderSpec spec, Preprocessor preprocess);
  virtual std::vector<std::vector<double>> embed_raw(std::span<const std::string> texts) const = 0;

 private:
  EmbedderSpec spec_;
  Preprocessor preprocess_;
};

/// Character-trigram feature hashing over lowercased text. Deterministic
/// across processes and platforms.
class OfflineHashEmbedder final : public Embedder {
 public:
  explicit OfflineHashEmbedder(EmbedderSpec spec, Preprocessor preprocess = {});

  /// Unnormalized bucket counts, exposed for tests.
  std::vector<double> counts(std::string_view text) const;

 protected:
  std::vector<std::vector<double>> embed_raw(std::span<const std::string> texts) const override;
};

/// POST {endpoint}/v1/embeddings, batches of at most kRemoteBatchSize, or
/// POST {endpoint}/api/embeddings one text per request.
class RemoteEmbedder final : public Embedder {
 public:
  RemoteEmbedder(EmbedderSpec spec, std::shared_ptr<http::Transport> transport,
                 http::RetryPolicy retry = {}, Preprocessor preprocess = {});

 protected:
  std::vector<std::vector<double>> embed_raw(std::span<const std::string> texts) const override;

 private:
  std::vector<std::vector<double>> embed_openai_batch(std::span<const std::string> batch) const;
  std::vector<double> embed_ollama_one(const std::string& text) const;

  std::shared_ptr<http::Transport> transport_;
  http::RetryPolicy retry_;
};

std::unique_ptr<Embedder> make_embedder(const EmbedderSpec& spec, Preprocessor preprocess = {});

/// Convenience wrapper: make_embedder(spec)->embed(texts).
std::vector<EmbeddingVector> embed_texts(const EmbedderSpec& spec,
                                         std::span<const std::string> texts);

}  // namespace raguav::embedding
