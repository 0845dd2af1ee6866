#include <cstdlib>
#include <regex>
#include <thread>

#include <httplib.h>

#include "raguav/error.hpp"
#include "raguav/http.hpp"

namespace raguav::http {

namespace {

class HttplibTransport final : public Transport {
 public:
  HttplibTransport(const Endpoint& endpoint, std::chrono::seconds timeout)
      : endpoint_(endpoint), timeout_(timeout) {}

  Response post_json(const std::string& path, const std::string& body,
                     const Headers& headers) override {
    httplib::Headers hs;
    for (const auto& [k, v] : headers) hs.emplace(k, v);
    // One client per call: httplib::Client is not safe for concurrent use.
    httplib::Client client(endpoint_.scheme_host_port);
    client.set_connection_timeout(std::chrono::seconds(10));
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    auto result = client.Post(endpoint_.path_prefix + path, hs, body, "application/json");
    if (!result) {
      throw ProviderError("transport failure posting to " + endpoint_.scheme_host_port +
                              endpoint_.path_prefix + path + ": " +
                              httplib::to_string(result.error()),
                          true, 1);
    }
    return {result->status, result->body};
  }

 private:
  Endpoint endpoint_;
  std::chrono::seconds timeout_;
};

}  // namespace

Endpoint parse_endpoint(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/\s]+)(/[^\s]*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw ConfigError("malformed endpoint URL '" + url + "'");
  std::string prefix = m[2].matched ? m[2].str() : "";
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {m[1].str(), prefix};
}

std::unique_ptr<Transport> make_transport(const std::string& endpoint_url,
                                          std::chrono::seconds timeout) {
  return std::make_unique<HttplibTransport>(parse_endpoint(endpoint_url), timeout);
}

Response post_with_retries(Transport& transport, const std::string& path, const std::string& body,
                           const Headers& headers, const RetryPolicy& policy) {
  auto backoff = policy.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      Response r = transport.post_json(path, body, headers);
      if (r.status >= 200 && r.status < 300) return r;
      if (r.status >= 400 && r.status < 500) {
        throw ConfigError("HTTP " + std::to_string(r.status) + " from " + path + ": " + r.body,
                          r.status);
      }
      throw ProviderError("HTTP " + std::to_string(r.status) + " from " + path + ": " + r.body,
                          true, attempt, r.status);
    } catch (const ProviderError& e) {
      if (!e.retryable() || attempt > policy.max_retries) {
        throw ProviderError(e.what(), e.retryable(), attempt, e.http_status());
      }
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

Headers bearer_headers(const std::string& env_var) {
  if (env_var.empty()) return {};
  const char* value = std::getenv(env_var.c_str());
  if (value == nullptr || *value == '\0')
    throw ConfigError("credential environment variable " + env_var + " is not set");
  return {{"Authorization", std::string("Bearer ") + value}};
}

}  // namespace raguav::http
