#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "raguav/embedding.hpp"

namespace raguav::vectorstore {

struct StoredEntry {
  std::string chunk_id;
  embedding::EmbeddingVector vector;
  std::string payload;
};

struct RetrievalResult {
  std::string chunk_id;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
  std::string payload;

  bool operator==(const RetrievalResult&) const = default;
};

/// Exhaustive cosine index over unit vectors. Ties on score are broken by
/// ascending chunk_id so results are reproducible.
///
/// Build phase (upsert) needs exclusive access; afterwards any number of
/// threads may call top_k concurrently.
class FlatStore {
 public:
  FlatStore() = default;
  explicit FlatStore(embedding::EmbedderSpec embedder) : embedder_(std::move(embedder)) {}

  /// The first entry fixes the dimension. An entry with an existing
  /// chunk_id replaces the earlier one in place.
  void upsert(std::span<const StoredEntry> entries);
  void upsert(StoredEntry entry);

  std::vector<RetrievalResult> top_k(const embedding::EmbeddingVector& query, std::size_t k) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<StoredEntry>& entries() const noexcept { return entries_; }

  /// Embedder that produced the stored vectors, when known.
  const std::optional<embedding::EmbedderSpec>& embedder() const noexcept { return embedder_; }

  /// JSON-lines: one header object {format, version, dimension, count, ...}
  /// followed by `count` entry objects.
  std::string serialize() const;
  static FlatStore deserialize(std::string_view contents);

  void save(const std::filesystem::path& path) const;
  static FlatStore load(const std::filesystem::path& path);

 private:
  std::optional<embedding::EmbedderSpec> embedder_;
  std::size_t dimension_ = 0;
  std::vector<StoredEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace raguav::vectorstore
