#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace raguav::corpus {

inline constexpr std::string_view kDefaultPageDelimiter = "%%PAGE%%";

struct SourceDocument {
  std::string doc_id;
  std::string title;
  std::string body;  // LaTeX, passed through untouched
};

struct DocumentChunk {
  std::string chunk_id;
  std::string doc_id;
  std::size_t page_index = 0;
  std::string text;
  std::size_t char_count = 0;  // UTF-8 code points in text

  bool operator==(const DocumentChunk&) const = default;
};

/// A page boundary is `marker` alone on a line with a line before and after
/// it, i.e. each non-overlapping occurrence of separator().
struct PageDelimiter {
  std::string marker{kDefaultPageDelimiter};

  /// The byte sequence that separates two pages inside a body.
  std::string separator() const { return "\n" + marker + "\n"; }
};

struct CorpusStats {
  std::map<std::string, std::size_t> per_document;
  std::size_t total = 0;
};

std::string make_chunk_id(std::string_view doc_id, std::size_t page_index);

std::size_t utf8_length(std::string_view text) noexcept;

/// One document per path, doc_id = file stem. Throws IngestionError for unreadable
/// files and ValidationError for blank files or duplicate stems.
std::vector<SourceDocument> load_documents(std::span<const std::filesystem::path> paths);

/// Splits at every delimiter line. Joining the chunk texts with
/// `delimiter.separator()` restores the body byte for byte; a page with no
/// text between two markers yields an empty chunk so that chunk count stays
/// marker count + 1.
std::vector<DocumentChunk> chunk_by_page(const SourceDocument& doc,
                                         const PageDelimiter& delimiter = {});

std::vector<DocumentChunk> chunk_documents(std::span<const SourceDocument> docs,
                                           const PageDelimiter& delimiter = {});

CorpusStats corpus_stats(std::span<const DocumentChunk> chunks);

/// JSON-lines, one {chunk_id, doc_id, page_index, text} object per line.
std::string to_jsonl(std::span<const DocumentChunk> chunks);
std::vector<DocumentChunk> from_jsonl(std::string_view contents);

void save_chunks(const std::filesystem::path& path, std::span<const DocumentChunk> chunks);
std::vector<DocumentChunk> load_chunks(const std::filesystem::path& path);

}  // namespace raguav::corpus
