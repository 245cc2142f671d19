#include "jsonl.hpp"

#include <sstream>

#include "xmr/error.hpp"

namespace xmr::detail {

LineReader::LineReader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw IoError("cannot open " + path.string());
}

bool LineReader::next() {
  while (true) {
    offset_ = next_offset_;
    if (!std::getline(in_, text_)) return false;
    ++line_;
    next_offset_ += text_.size() + (in_.eof() ? 0 : 1);
    if (!text_.empty() && text_.back() == '\r') text_.pop_back();
    if (text_.find_first_not_of(" \t") != std::string::npos) return true;
  }
}

Json LineReader::parse() const {
  try {
    return Json::parse(text_);
  } catch (const Json::parse_error& e) {
    const std::size_t at = offset_ + (e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(path_.string() + ":" + std::to_string(line_) + ": byte " + std::to_string(at) + ": " +
                         e.what(),
                     line_, at);
  }
}

void LineReader::fail(const std::string& message) const {
  throw ParseError(path_.string() + ":" + std::to_string(line_) + ": " + message, line_, offset_);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace xmr::detail
