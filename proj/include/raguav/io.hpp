#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace raguav::io {

/// Whole-file read in binary mode. Throws IoError naming the path.
std::string read_file(const std::filesystem::path& path);

/// Truncating write in binary mode. Throws IoError naming the path.
void write_file(const std::filesystem::path& path, std::string_view contents);

struct Line {
  std::string_view text;
  std::uint64_t offset = 0;  // byte offset of the first character
};

/// Splits on '\n'. A trailing newline does not produce an empty last line.
std::vector<Line> split_lines(std::string_view contents);

}  // namespace raguav::io
