#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "raguav/http.hpp"

namespace raguav::llm {

enum class Role { system, user, assistant };

const char* to_string(Role role) noexcept;
std::optional<Role> parse_role(std::string_view name) noexcept;

struct ChatMessage {
  Role role = Role::user;
  std::string content;
};

inline constexpr double kDefaultTemperature = 0.0;
inline constexpr int kDefaultMaxTokens = 4096;

struct ChatRequest {
  std::string model_id;
  std::vector<ChatMessage> messages;
  double temperature = kDefaultTemperature;
  int max_tokens = kDefaultMaxTokens;

  /// Throws ConfigError unless there is a user message, every content is
  /// non-empty, temperature >= 0 and max_tokens > 0.
  void validate() const;
};

struct ChatResponse {
  std::string text;  // verbatim, never trimmed
  std::string model_id;
  std::int64_t latency_ms = 0;
  std::string finish_reason;
};

/// Canonical JSON of the request fields that determine a completion.
std::string canonical_request_json(const ChatRequest& request);

/// SHA-256 over canonical_request_json; keys transcripts.
std::string request_digest(const ChatRequest& request);

class ChatClient {
 public:
  virtual ~ChatClient() = default;

  /// Validates, then dispatches. Safe for concurrent use.
  ChatResponse chat(const ChatRequest& request);

 protected:
  virtual ChatResponse do_chat(const ChatRequest& request) = 0;
};

enum class Dialect { openai, ollama };

const char* to_string(Dialect dialect) noexcept;
std::optional<Dialect> parse_dialect(std::string_view name) noexcept;

/// openai: POST /v1/chat/completions, text at choices[0].message.content.
/// ollama: POST /api/chat with stream=false, text at message.content.
class HttpChatClient final : public ChatClient {
 public:
  HttpChatClient(Dialect dialect, std::shared_ptr<http::Transport> transport,
                 std::string credential_env = {}, http::RetryPolicy retry = {});

  /// Request body for the dialect, exposed for wire-format tests.
  std::string request_body(const ChatRequest& request) const;

 protected:
  ChatResponse do_chat(const ChatRequest& request) override;

 private:
  Dialect dialect_;
  std::shared_ptr<http::Transport> transport_;
  std::string credential_env_;
  http::RetryPolicy retry_;
};

struct TranscriptEntry {
  std::string digest;
  std::string request_json;  // canonical_request_json of the request
  std::string response_text;
  std::int64_t latency_ms = 0;
};

std::string to_transcript_line(const TranscriptEntry& entry);
std::vector<TranscriptEntry> parse_transcript(std::string_view contents);

/// Serves recorded responses keyed by request digest. Later lines win.
class ReplayClient final : public ChatClient {
 public:
  explicit ReplayClient(std::vector<TranscriptEntry> entries);
  static std::unique_ptr<ReplayClient> from_file(const std::filesystem::path& path);

  std::size_t size() const noexcept { return by_digest_.size(); }

 protected:
  ChatResponse do_chat(const ChatRequest& request) override;

 private:
  std::unordered_map<std::string, TranscriptEntry> by_digest_;
};

/// Forwards to the wrapped client and appends one transcript line per
/// successful call. The file is truncated when the wrapper is created.
class RecordingClient final : public ChatClient {
 public:
  RecordingClient(std::shared_ptr<ChatClient> inner, const std::filesystem::path& path);

 protected:
  ChatResponse do_chat(const ChatRequest& request) override;

 private:
  std::shared_ptr<ChatClient> inner_;
  std::filesystem::path path_;
  std::mutex mutex_;
  std::ofstream out_;
};

}  // namespace raguav::llm
