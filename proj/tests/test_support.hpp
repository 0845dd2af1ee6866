#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "raguav/error.hpp"
#include "raguav/llm_client.hpp"

namespace raguav::testkit {

inline std::filesystem::path data_dir() { return RAGUAV_DATA_DIR; }
inline std::filesystem::path fixture_bench() { return data_dir() / "bench" / "uav_math_fixture.json"; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("raguav-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Chat client answering from a callback.
class ScriptedClient final : public llm::ChatClient {
 public:
  using Script = std::function<std::string(const llm::ChatRequest&)>;
  explicit ScriptedClient(Script script) : script_(std::move(script)) {}

  std::atomic<int> calls{0};

 protected:
  llm::ChatResponse do_chat(const llm::ChatRequest& request) override {
    ++calls;
    return {script_(request), request.model_id, 1, "stop"};
  }

 private:
  Script script_;
};

}  // namespace raguav::testkit
