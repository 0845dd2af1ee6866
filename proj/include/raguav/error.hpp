#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace raguav {

enum class ErrorKind {
  ingestion,
  validation,
  provider,
  protocol,
  config,
  missing_transcript,
  store,
  format,
  degenerate_vector,
  oracle,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Root of every error the library throws. The kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class IngestionError : public Error {
 public:
  IngestionError(std::string path, const std::string& what)
      : Error(ErrorKind::ingestion, what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

/// Transport, auth or server-side failure talking to a remote provider.
class ProviderError : public Error {
 public:
  ProviderError(const std::string& what, bool retryable, int attempts, int http_status = 0)
      : Error(ErrorKind::provider, what),
        retryable_(retryable),
        attempts_(attempts),
        http_status_(http_status) {}
  bool retryable() const noexcept { return retryable_; }
  int attempts() const noexcept { return attempts_; }
  int http_status() const noexcept { return http_status_; }

 private:
  bool retryable_;
  int attempts_;
  int http_status_;
};

/// The remote answered, but not in the shape the dialect promises.
class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what) : Error(ErrorKind::protocol, what) {}
};

/// Precondition or configuration problem; never retried.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int http_status = 0)
      : Error(ErrorKind::config, what), http_status_(http_status) {}
  int http_status() const noexcept { return http_status_; }

 private:
  int http_status_;
};

class MissingTranscriptError : public Error {
 public:
  explicit MissingTranscriptError(std::string digest)
      : Error(ErrorKind::missing_transcript, "no recorded response for request digest " + digest),
        digest_(std::move(digest)) {}
  const std::string& digest() const noexcept { return digest_; }

 private:
  std::string digest_;
};

class StoreError : public Error {
 public:
  explicit StoreError(const std::string& what) : Error(ErrorKind::store, what) {}
};

class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : Error(ErrorKind::format, what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

class DegenerateVectorError : public Error {
 public:
  explicit DegenerateVectorError(const std::string& what)
      : Error(ErrorKind::degenerate_vector, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

/// Exit code contract of the command-line tool: 1 validation, 2 provider, 3 I/O.
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace raguav
