#include "xmr/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "jsonl.hpp"
#include "xmr/error.hpp"

namespace xmr {

using detail::Json;

FeatureTable::FeatureTable(std::size_t feature_dim) : dim_(feature_dim) {
  if (feature_dim == 0) throw DomainError("feature dimension must be positive");
}

void FeatureTable::add(std::string id, std::span<const float> activation) {
  if (activation.size() != dim_) {
    throw DimensionError("image '" + id + "' has " + std::to_string(activation.size()) +
                         " activations, expected " + std::to_string(dim_));
  }
  if (index_.contains(id)) throw DuplicateIdError("duplicate image id '" + id + "'");
  index_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  values_.insert(values_.end(), activation.begin(), activation.end());
}

std::span<const float> FeatureTable::row(std::size_t row) const {
  if (row >= ids_.size()) throw BoundsError("feature row out of range");
  return std::span<const float>(values_).subspan(row * dim_, dim_);
}

std::optional<std::span<const float>> FeatureTable::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return row(it->second);
}

Vocabulary::Vocabulary(std::vector<std::string> words, std::string unk)
    : words_(std::move(words)), unk_(std::move(unk)) {
  index_.reserve(words_.size());
  for (std::uint32_t i = 0; i < words_.size(); ++i) {
    if (words_[i] == unk_) throw InvariantError("vocabulary word equals the UNK token '" + unk_ + "'");
    if (!index_.emplace(words_[i], i).second) {
      throw InvariantError("duplicate vocabulary word '" + words_[i] + "'");
    }
  }
}

std::uint32_t Vocabulary::lookup(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  return it == index_.end() ? unk_index() : it->second;
}

const std::string& Vocabulary::word(std::uint32_t index) const {
  if (index == unk_index()) return unk_;
  if (index > unk_index()) throw BoundsError("vocabulary index " + std::to_string(index) + " out of range");
  return words_[index];
}

std::uint64_t Vocabulary::fingerprint() const noexcept {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  for (const auto& w : words_) mix(w);
  mix(unk_);
  return h;
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  std::string current;
  for (const char ch : sentence) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (!std::ispunct(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

FeatureTable load_features(const std::filesystem::path& path, std::size_t feature_dim) {
  FeatureTable table(feature_dim);
  detail::LineReader reader(path);
  std::vector<float> values;
  while (reader.next()) {
    const Json record = reader.parse();
    if (!record.is_object() || !record.contains("id") || !record["id"].is_string()) {
      reader.fail("record lacks a string \"id\"");
    }
    const auto& activation = record.contains("activation") ? record["activation"] : Json();
    if (!activation.is_array()) reader.fail("record lacks an \"activation\" array");
    values.clear();
    for (const auto& v : activation) {
      if (!v.is_number()) reader.fail("non-numeric activation value");
      values.push_back(v.get<float>());
    }
    const auto id = record["id"].get<std::string>();
    try {
      table.add(id, values);
    } catch (const DimensionError& e) {
      throw DimensionError(path.string() + ":" + std::to_string(reader.line()) + ": " + e.what());
    } catch (const DuplicateIdError& e) {
      throw DuplicateIdError(path.string() + ":" + std::to_string(reader.line()) + ": " + e.what());
    }
  }
  return table;
}

void save_features(const FeatureTable& table, const std::filesystem::path& path) {
  std::string out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    Json record;
    record["id"] = table.id(r);
    auto& activation = record["activation"] = Json::array();
    for (const float v : table.row(r)) activation.push_back(static_cast<double>(v));
    out += record.dump();
    out += '\n';
  }
  detail::write_text(path, out);
}

AnnotationTable load_annotations(const std::filesystem::path& path) {
  AnnotationTable table;
  detail::LineReader reader(path);
  while (reader.next()) {
    const Json record = reader.parse();
    if (!record.is_object() || !record.contains("story_id") || !record["story_id"].is_string()) {
      reader.fail("record lacks a string \"story_id\"");
    }
    Story story;
    story.story_id = record["story_id"].get<std::string>();
    if (!record.contains("images") || !record["images"].is_array()) {
      reader.fail("story '" + story.story_id + "' lacks an \"images\" array");
    }
    const auto& images = record["images"];
    if (images.size() != kStreamLength) {
      throw StructureError(path.string() + ":" + std::to_string(reader.line()) + ": story '" + story.story_id +
                           "' has " + std::to_string(images.size()) + " images, expected " +
                           std::to_string(kStreamLength));
    }
    for (std::size_t i = 0; i < kStreamLength; ++i) {
      const auto& image = images[i];
      auto& dst = story.images[i];
      if (!image.is_object() || !image.contains("image_id") || !image["image_id"].is_string()) {
        reader.fail("story '" + story.story_id + "' image " + std::to_string(i) + " lacks \"image_id\"");
      }
      dst.image_id = image["image_id"].get<std::string>();
      if (image.contains("tokens")) {
        if (!image["tokens"].is_array()) reader.fail("\"tokens\" must be an array");
        for (const auto& t : image["tokens"]) {
          if (!t.is_string()) reader.fail("non-string token in story '" + story.story_id + "'");
          dst.tokens.push_back(t.get<std::string>());
        }
      } else if (image.contains("sentence") && image["sentence"].is_string()) {
        dst.tokens = tokenize(image["sentence"].get<std::string>());
      } else {
        reader.fail("story '" + story.story_id + "' image '" + dst.image_id + "' has neither tokens nor sentence");
      }
      if (dst.tokens.empty()) {
        throw StructureError(path.string() + ":" + std::to_string(reader.line()) + ": story '" + story.story_id +
                             "' image '" + dst.image_id + "' has an empty sentence");
      }
    }
    table.stories.push_back(std::move(story));
  }
  return table;
}

void save_annotations(const AnnotationTable& table, const std::filesystem::path& path) {
  std::string out;
  for (const auto& story : table.stories) {
    Json record;
    record["story_id"] = story.story_id;
    auto& images = record["images"] = Json::array();
    for (const auto& image : story.images) {
      images.push_back(Json{{"image_id", image.image_id}, {"tokens", image.tokens}});
    }
    out += record.dump();
    out += '\n';
  }
  detail::write_text(path, out);
}

WordCounts count_words(const AnnotationTable& annotations) {
  WordCounts counts;
  for (const auto& story : annotations.stories) {
    for (const auto& image : story.images) {
      for (const auto& token : image.tokens) ++counts[token];
    }
  }
  return counts;
}

Vocabulary build_vocabulary(const WordCounts& counts, std::size_t min_count) {
  if (min_count == 0) throw DomainError("min_count must be at least 1");
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (const auto& [word, count] : counts) {
    if (count >= min_count && word != Vocabulary::kDefaultUnk) kept.emplace_back(word, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> words;
  words.reserve(kept.size());
  for (auto& [word, count] : kept) words.push_back(std::move(word));
  return Vocabulary(std::move(words));
}

Vocabulary build_vocabulary(const AnnotationTable& annotations, std::size_t min_count) {
  return build_vocabulary(count_words(annotations), min_count);
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  Json doc;
  try {
    doc = Json::parse(detail::read_text(path));
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": byte " + std::to_string(e.byte) + ": " + e.what(), 0, e.byte);
  }
  if (!doc.is_object() || !doc.contains("words") || !doc["words"].is_array()) {
    throw ParseError(path.string() + ": vocabulary lacks a \"words\" array");
  }
  std::vector<std::string> words;
  for (const auto& w : doc["words"]) {
    if (!w.is_string()) throw ParseError(path.string() + ": non-string vocabulary entry");
    words.push_back(w.get<std::string>());
  }
  std::string unk(Vocabulary::kDefaultUnk);
  if (doc.contains("unk")) {
    if (!doc["unk"].is_string()) throw ParseError(path.string() + ": \"unk\" must be a string");
    unk = doc["unk"].get<std::string>();
  }
  return Vocabulary(std::move(words), std::move(unk));
}

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path) {
  Json doc;
  doc["unk"] = vocab.unk();
  doc["words"] = vocab.words();
  detail::write_text(path, doc.dump() + "\n");
}

}  // namespace xmr
