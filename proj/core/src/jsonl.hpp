#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace xmr::detail {

using Json = nlohmann::ordered_json;

/// Line-at-a-time reader that tracks 1-based line numbers and the byte
/// offset at which each line starts.
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path);

  /// Skips blank lines. Returns false at end of file.
  bool next();

  const std::string& text() const noexcept { return text_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t offset() const noexcept { return offset_; }
  /// Byte offset just past the last line read.
  std::size_t end_offset() const noexcept { return next_offset_; }
  const std::filesystem::path& path() const noexcept { return path_; }

  /// Parses the current line, raising ParseError with file, line and byte
  /// offset on failure.
  Json parse() const;

  [[noreturn]] void fail(const std::string& message) const;

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::string text_;
  std::size_t line_ = 0;
  std::size_t offset_ = 0;
  std::size_t next_offset_ = 0;
};

/// Writes `content` to `path`, raising IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& content);

std::string read_text(const std::filesystem::path& path);

}  // namespace xmr::detail
