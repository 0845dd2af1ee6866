#include "raguav/error.hpp"

namespace raguav {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ingestion: return "ingestion";
    case ErrorKind::validation: return "validation";
    case ErrorKind::provider: return "provider";
    case ErrorKind::protocol: return "protocol";
    case ErrorKind::config: return "config";
    case ErrorKind::missing_transcript: return "missing_transcript";
    case ErrorKind::store: return "store";
    case ErrorKind::format: return "format";
    case ErrorKind::degenerate_vector: return "degenerate_vector";
    case ErrorKind::oracle: return "oracle";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::provider:
    case ErrorKind::protocol:
    case ErrorKind::missing_transcript:
      return 2;
    case ErrorKind::ingestion:
    case ErrorKind::format:
    case ErrorKind::io:
      return 3;
    default:
      return 1;
  }
}

}  // namespace raguav
