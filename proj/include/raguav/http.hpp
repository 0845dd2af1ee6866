#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace raguav::http {

struct Response {
  int status = 0;
  std::string body;
};

using Headers = std::vector<std::pair<std::string, std::string>>;

/// Minimal JSON-over-HTTP POST surface shared by the embedding and chat
/// providers. Implementations throw a retryable ProviderError when no HTTP
/// response was obtained at all.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual Response post_json(const std::string& path, const std::string& body,
                             const Headers& headers) = 0;
};

struct Endpoint {
  std::string scheme_host_port;  // e.g. "http://localhost:11434"
  std::string path_prefix;       // "" or e.g. "/proxy"
};

/// Splits "scheme://host[:port][/prefix]". Throws ConfigError on anything else.
Endpoint parse_endpoint(const std::string& url);

std::unique_ptr<Transport> make_transport(const std::string& endpoint_url,
                                          std::chrono::seconds timeout = std::chrono::seconds(120));

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{250};
};

/// POSTs with retry on retryable ProviderError; maps the final status:
/// 2xx returns, 4xx throws ConfigError, everything else throws ProviderError.
Response post_with_retries(Transport& transport, const std::string& path, const std::string& body,
                           const Headers& headers, const RetryPolicy& policy);

/// Adds "Authorization: Bearer <value of env var>" when env_var is non-empty.
/// The variable is read on every call. Unset variable is a ConfigError.
Headers bearer_headers(const std::string& env_var);

}  // namespace raguav::http
