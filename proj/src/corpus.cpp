#include "raguav/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "raguav/error.hpp"
#include "raguav/io.hpp"

namespace raguav::corpus {

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string extract_title(std::string_view body, std::string fallback) {
  constexpr std::string_view kTitle = "\\title{";
  auto pos = body.find(kTitle);
  if (pos == std::string_view::npos) return fallback;
  pos += kTitle.size();
  int depth = 1;
  std::string title;
  for (auto i = pos; i < body.size(); ++i) {
    char c = body[i];
    if (c == '{') ++depth;
    if (c == '}' && --depth == 0) return title;
    title.push_back(c);
  }
  return fallback;
}

}  // namespace

std::string make_chunk_id(std::string_view doc_id, std::size_t page_index) {
  return std::string(doc_id) + "#p" + std::to_string(page_index);
}

std::size_t utf8_length(std::string_view text) noexcept {
  return static_cast<std::size_t>(std::count_if(
      text.begin(), text.end(), [](unsigned char c) { return (c & 0xC0) != 0x80; }));
}

std::vector<SourceDocument> load_documents(std::span<const std::filesystem::path> paths) {
  std::vector<SourceDocument> docs;
  docs.reserve(paths.size());
  std::set<std::string> seen;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestionError(path.string(), "cannot read corpus file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string body = std::move(buf).str();
    if (is_blank(body)) throw ValidationError("corpus file " + path.string() + " is empty");

    std::string doc_id = path.stem().string();
    if (!seen.insert(doc_id).second)
      throw ValidationError("duplicate doc_id '" + doc_id + "' derived from " + path.string());
    std::string title = extract_title(body, doc_id);
    docs.push_back({std::move(doc_id), std::move(title), std::move(body)});
  }
  return docs;
}

std::vector<DocumentChunk> chunk_by_page(const SourceDocument& doc, const PageDelimiter& delimiter) {
  const std::string sep = delimiter.separator();
  std::string_view body = doc.body;
  std::vector<DocumentChunk> chunks;

  auto emit = [&](std::string_view text) {
    DocumentChunk c;
    c.page_index = chunks.size();
    c.chunk_id = make_chunk_id(doc.doc_id, c.page_index);
    c.doc_id = doc.doc_id;
    c.text = std::string(text);
    c.char_count = utf8_length(text);
    chunks.push_back(std::move(c));
  };

  std::size_t start = 0;
  while (true) {
    auto hit = body.find(sep, start);
    if (hit == std::string_view::npos) break;
    emit(body.substr(start, hit - start));
    start = hit + sep.size();
  }
  emit(body.substr(start));
  return chunks;
}

std::vector<DocumentChunk> chunk_documents(std::span<const SourceDocument> docs,
                                           const PageDelimiter& delimiter) {
  std::vector<DocumentChunk> all;
  for (const auto& doc : docs) {
    auto chunks = chunk_by_page(doc, delimiter);
    std::move(chunks.begin(), chunks.end(), std::back_inserter(all));
  }
  return all;
}

CorpusStats corpus_stats(std::span<const DocumentChunk> chunks) {
  CorpusStats stats;
  for (const auto& c : chunks) ++stats.per_document[c.doc_id];
  stats.total = chunks.size();
  return stats;
}

std::string to_jsonl(std::span<const DocumentChunk> chunks) {
  std::string out;
  for (const auto& c : chunks) {
    nlohmann::ordered_json j;
    j["chunk_id"] = c.chunk_id;
    j["doc_id"] = c.doc_id;
    j["page_index"] = c.page_index;
    j["text"] = c.text;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<DocumentChunk> from_jsonl(std::string_view contents) {
  std::vector<DocumentChunk> chunks;
  std::set<std::string> ids;
  for (const auto& line : io::split_lines(contents)) {
    if (is_blank(line.text)) continue;
    try {
      auto j = nlohmann::json::parse(line.text);
      DocumentChunk c;
      c.chunk_id = j.at("chunk_id").get<std::string>();
      c.doc_id = j.at("doc_id").get<std::string>();
      c.page_index = j.at("page_index").get<std::size_t>();
      c.text = j.at("text").get<std::string>();
      c.char_count = utf8_length(c.text);
      if (!ids.insert(c.chunk_id).second)
        throw FormatError("duplicate chunk_id " + c.chunk_id, line.offset);
      chunks.push_back(std::move(c));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("malformed chunk line: ") + e.what(), line.offset);
    }
  }
  return chunks;
}

void save_chunks(const std::filesystem::path& path, std::span<const DocumentChunk> chunks) {
  io::write_file(path, to_jsonl(chunks));
}

std::vector<DocumentChunk> load_chunks(const std::filesystem::path& path) {
  return from_jsonl(io::read_file(path));
}

}  // namespace raguav::corpus
