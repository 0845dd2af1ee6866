#include "raguav/llm_client.hpp"

#include <chrono>

#include <json.hpp>

#include "raguav/digest.hpp"
#include "raguav/error.hpp"
#include "raguav/io.hpp"

namespace raguav::llm {

using nlohmann::json;

const char* to_string(Role role) noexcept {
  switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

std::optional<Role> parse_role(std::string_view name) noexcept {
  if (name == "system") return Role::system;
  if (name == "user") return Role::user;
  if (name == "assistant") return Role::assistant;
  return std::nullopt;
}

const char* to_string(Dialect dialect) noexcept {
  return dialect == Dialect::openai ? "openai" : "ollama";
}

std::optional<Dialect> parse_dialect(std::string_view name) noexcept {
  if (name == "openai") return Dialect::openai;
  if (name == "ollama") return Dialect::ollama;
  return std::nullopt;
}

void ChatRequest::validate() const {
  if (model_id.empty()) throw ConfigError("chat request has no model_id");
  if (messages.empty()) throw ConfigError("chat request has no messages");
  bool has_user = false;
  for (const auto& m : messages) {
    if (m.content.empty()) throw ConfigError("chat request has an empty message");
    has_user = has_user || m.role == Role::user;
  }
  if (!has_user) throw ConfigError("chat request has no user message");
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  if (max_tokens <= 0) throw ConfigError("max_tokens must be > 0");
}

namespace {

json messages_json(const ChatRequest& request) {
  json arr = json::array();
  for (const auto& m : request.messages)
    arr.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  return arr;
}

json request_json(const ChatRequest& request) {
  // nlohmann::json keeps keys sorted, which makes this canonical.
  return {{"model", request.model_id},
          {"messages", messages_json(request)},
          {"temperature", request.temperature},
          {"max_tokens", request.max_tokens}};
}

}  // namespace

std::string canonical_request_json(const ChatRequest& request) {
  return request_json(request).dump();
}

std::string request_digest(const ChatRequest& request) {
  return sha256_hex(canonical_request_json(request));
}

ChatResponse ChatClient::chat(const ChatRequest& request) {
  request.validate();
  return do_chat(request);
}

// ---------------------------------------------------------------------------

HttpChatClient::HttpChatClient(Dialect dialect, std::shared_ptr<http::Transport> transport,
                               std::string credential_env, http::RetryPolicy retry)
    : dialect_(dialect),
      transport_(std::move(transport)),
      credential_env_(std::move(credential_env)),
      retry_(retry) {
  if (!transport_) throw ConfigError("chat client needs a transport");
}

std::string HttpChatClient::request_body(const ChatRequest& request) const {
  json body;
  body["model"] = request.model_id;
  body["messages"] = messages_json(request);
  if (dialect_ == Dialect::openai) {
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_tokens;
  } else {
    body["stream"] = false;
    body["options"] = {{"temperature", request.temperature}, {"num_predict", request.max_tokens}};
  }
  return body.dump();
}

ChatResponse HttpChatClient::do_chat(const ChatRequest& request) {
  const char* path = dialect_ == Dialect::openai ? "/v1/chat/completions" : "/api/chat";
  const auto started = std::chrono::steady_clock::now();
  auto resp = http::post_with_retries(*transport_, path, request_body(request),
                                      http::bearer_headers(credential_env_), retry_);
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);

  json body;
  try {
    body = json::parse(resp.body);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("chat response is not JSON: ") + e.what());
  }

  ChatResponse out;
  out.model_id = request.model_id;
  out.latency_ms = elapsed.count();
  try {
    if (dialect_ == Dialect::openai) {
      const auto& choice = body.at("choices").at(0);
      out.text = choice.at("message").at("content").get<std::string>();
      if (choice.contains("finish_reason") && choice["finish_reason"].is_string())
        out.finish_reason = choice["finish_reason"].get<std::string>();
    } else {
      out.text = body.at("message").at("content").get<std::string>();
      if (body.contains("done_reason") && body["done_reason"].is_string())
        out.finish_reason = body["done_reason"].get<std::string>();
    }
    if (body.contains("model") && body["model"].is_string())
      out.model_id = body["model"].get<std::string>();
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("chat response missing completion text: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string to_transcript_line(const TranscriptEntry& entry) {
  nlohmann::ordered_json j;
  j["digest"] = entry.digest;
  j["request"] = json::parse(entry.request_json);
  j["response_text"] = entry.response_text;
  j["latency_ms"] = entry.latency_ms;
  return j.dump();
}

std::vector<TranscriptEntry> parse_transcript(std::string_view contents) {
  std::vector<TranscriptEntry> entries;
  for (const auto& line : io::split_lines(contents)) {
    if (line.text.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      auto j = json::parse(line.text);
      TranscriptEntry e;
      e.digest = j.at("digest").get<std::string>();
      e.request_json = j.at("request").dump();
      e.response_text = j.at("response_text").get<std::string>();
      e.latency_ms = j.value("latency_ms", std::int64_t{0});
      entries.push_back(std::move(e));
    } catch (const json::exception& e) {
      throw FormatError(std::string("bad transcript line: ") + e.what(), line.offset);
    }
  }
  return entries;
}

ReplayClient::ReplayClient(std::vector<TranscriptEntry> entries) {
  for (auto& e : entries) by_digest_[e.digest] = std::move(e);
}

std::unique_ptr<ReplayClient> ReplayClient::from_file(const std::filesystem::path& path) {
  return std::make_unique<ReplayClient>(parse_transcript(io::read_file(path)));
}

ChatResponse ReplayClient::do_chat(const ChatRequest& request) {
  const auto digest = request_digest(request);
  auto it = by_digest_.find(digest);
  if (it == by_digest_.end()) throw MissingTranscriptError(digest);
  return {it->second.response_text, request.model_id, it->second.latency_ms, "replay"};
}

// ---------------------------------------------------------------------------

RecordingClient::RecordingClient(std::shared_ptr<ChatClient> inner,
                                 const std::filesystem::path& path)
    : inner_(std::move(inner)), path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!inner_) throw ConfigError("recording client needs a wrapped client");
  if (!out_) throw IoError("cannot open transcript " + path.string() + " for writing");
}

ChatResponse RecordingClient::do_chat(const ChatRequest& request) {
  ChatResponse response = inner_->chat(request);
  TranscriptEntry entry{request_digest(request), canonical_request_json(request), response.text,
                        response.latency_ms};
  const auto line = to_transcript_line(entry);
  std::lock_guard lock(mutex_);
  out_ << line << '\n';
  out_.flush();
  if (!out_) throw IoError("recording failed: cannot append to " + path_.string());
  return response;
}

}  // namespace raguav::llm
