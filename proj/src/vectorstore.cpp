#include "raguav/vectorstore.hpp"

#include <algorithm>

#include <json.hpp>

#include "raguav/error.hpp"
#include "raguav/io.hpp"

namespace raguav::vectorstore {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::string_view kFormat = "raguav-flat-store";
constexpr int kVersion = 1;

}  // namespace

void FlatStore::upsert(StoredEntry entry) {
  const auto dim = entry.vector.values.size();
  if (dim == 0) throw StoreError("entry " + entry.chunk_id + " has an empty vector");
  if (dimension_ == 0) {
    dimension_ = dim;
  } else if (dim != dimension_) {
    throw StoreError("entry " + entry.chunk_id + " has dimension " + std::to_string(dim) +
                     ", store dimension is " + std::to_string(dimension_));
  }
  if (auto it = index_.find(entry.chunk_id); it != index_.end()) {
    entries_[it->second] = std::move(entry);
    return;
  }
  index_.emplace(entry.chunk_id, entries_.size());
  entries_.push_back(std::move(entry));
}

void FlatStore::upsert(std::span<const StoredEntry> entries) {
  // Validate the batch up front so a mismatch leaves the store untouched.
  std::size_t dim = dimension_;
  for (const auto& e : entries) {
    const auto d = e.vector.values.size();
    if (dim == 0) dim = d;
    if (d != dim)
      throw StoreError("entry " + e.chunk_id + " has dimension " + std::to_string(d) +
                       ", store dimension is " + std::to_string(dim));
  }
  for (const auto& e : entries) upsert(StoredEntry(e));
}

std::vector<RetrievalResult> FlatStore::top_k(const embedding::EmbeddingVector& query,
                                              std::size_t k) const {
  if (entries_.empty()) throw StoreError("top_k on an empty store");
  if (k == 0) throw StoreError("top_k needs k >= 1");
  if (query.values.size() != dimension_)
    throw StoreError("query has dimension " + std::to_string(query.values.size()) +
                     ", store dimension is " + std::to_string(dimension_));
  if (embedder_ && !query.spec_id.empty() && query.spec_id != embedder_->id())
    throw StoreError("query embedded with " + query.spec_id + ", store built with " +
                     embedder_->id());

  struct Scored {
    double score;
    std::size_t pos;
  };
  std::vector<Scored> scored;
  scored.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i)
    scored.push_back({embedding::dot(query.values, entries_[i].vector.values), i});

  const auto n = std::min(k, scored.size());
  auto better = [this](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return entries_[a.pos].chunk_id < entries_[b.pos].chunk_id;
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                    better);

  std::vector<RetrievalResult> out;
  out.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& e = entries_[scored[r].pos];
    out.push_back({e.chunk_id, scored[r].score, r + 1, e.payload});
  }
  return out;
}

std::string FlatStore::serialize() const {
  ordered_json header;
  header["format"] = kFormat;
  header["version"] = kVersion;
  header["dimension"] = dimension_;
  header["count"] = entries_.size();
  if (embedder_) {
    header["spec_id"] = embedder_->id();
    ordered_json e;
    e["kind"] = embedding::to_string(embedder_->kind);
    e["model_id"] = embedder_->model_id;
    e["dimension"] = embedder_->dimension;
    e["endpoint"] = embedder_->endpoint;
    e["credential_env"] = embedder_->credential_env;
    header["embedder"] = std::move(e);
  }
  std::string out = header.dump();
  out += '\n';
  for (const auto& entry : entries_) {
    ordered_json j;
    j["chunk_id"] = entry.chunk_id;
    j["payload"] = entry.payload;
    j["vector"] = entry.vector.values;
    out += j.dump();
    out += '\n';
  }
  return out;
}

FlatStore FlatStore::deserialize(std::string_view contents) {
  const auto lines = io::split_lines(contents);
  if (lines.empty()) throw FormatError("store file is empty", 0);

  FlatStore store;
  std::size_t count = 0;
  std::size_t dimension = 0;
  std::string spec_id;
  try {
    auto header = json::parse(lines[0].text);
    if (header.value("format", "") != kFormat) throw FormatError("not a flat store file", 0);
    if (header.value("version", 0) != kVersion)
      throw FormatError("unsupported store version", 0);
    dimension = header.at("dimension").get<std::size_t>();
    count = header.at("count").get<std::size_t>();
    if (header.contains("embedder")) {
      const auto& e = header["embedder"];
      embedding::EmbedderSpec spec;
      auto kind = embedding::parse_provider_kind(e.at("kind").get<std::string>());
      if (!kind) throw FormatError("unknown embedder kind in store header", 0);
      spec.kind = *kind;
      spec.model_id = e.at("model_id").get<std::string>();
      spec.dimension = e.at("dimension").get<std::size_t>();
      spec.endpoint = e.value("endpoint", "");
      spec.credential_env = e.value("credential_env", "");
      spec_id = spec.id();
      store.embedder_ = std::move(spec);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad store header: ") + e.what(), 0);
  }

  if (lines.size() - 1 != count) {
    const std::uint64_t offset =
        lines.size() - 1 > count ? lines[count + 1].offset : static_cast<std::uint64_t>(contents.size());
    throw FormatError("store header declares " + std::to_string(count) + " entries, file has " +
                          std::to_string(lines.size() - 1),
                      offset);
  }

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    StoredEntry entry;
    try {
      auto j = json::parse(line.text);
      entry.chunk_id = j.at("chunk_id").get<std::string>();
      entry.payload = j.at("payload").get<std::string>();
      entry.vector.values = j.at("vector").get<std::vector<double>>();
      entry.vector.spec_id = spec_id;
    } catch (const json::exception& e) {
      throw FormatError(std::string("bad store entry: ") + e.what(), line.offset);
    }
    if (entry.vector.values.size() != dimension)
      throw FormatError("entry " + entry.chunk_id + " does not match header dimension",
                        line.offset);
    if (store.index_.contains(entry.chunk_id))
      throw FormatError("duplicate chunk_id " + entry.chunk_id, line.offset);
    store.upsert(std::move(entry));
  }
  store.dimension_ = dimension;
  return store;
}

void FlatStore::save(const std::filesystem::path& path) const { io::write_file(path, serialize()); }

FlatStore FlatStore::load(const std::filesystem::path& path) {
  return deserialize(io::read_file(path));
}

}  // namespace raguav::vectorstore
