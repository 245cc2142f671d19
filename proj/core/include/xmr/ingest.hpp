#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace xmr {

/// Pre-pooled CNN activations keyed by image id, in file order.
///
/// Rows are stored contiguously; every row has exactly `dim()` values.
class FeatureTable {
 public:
  explicit FeatureTable(std::size_t feature_dim);

  /// Throws DimensionError on a length mismatch and DuplicateIdError when
  /// `id` is already present.
  void add(std::string id, std::span<const float> activation);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }

  const std::string& id(std::size_t row) const { return ids_.at(row); }
  std::span<const float> row(std::size_t row) const;
  std::optional<std::span<const float>> find(std::string_view id) const;

  friend bool operator==(const FeatureTable& a, const FeatureTable& b) {
    return a.dim_ == b.dim_ && a.ids_ == b.ids_ && a.values_ == b.values_;
  }

 private:
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::vector<float> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct ImageAnnotation {
  std::string image_id;
  std::vector<std::string> tokens;

  friend bool operator==(const ImageAnnotation&, const ImageAnnotation&) = default;
};

inline constexpr std::size_t kStreamLength = 5;

/// One photo stream: five images, one sentence each.
struct Story {
  std::string story_id;
  std::array<ImageAnnotation, kStreamLength> images;

  friend bool operator==(const Story&, const Story&) = default;
};

struct AnnotationTable {
  std::vector<Story> stories;
};

/// Word <-> index map. Indexed words occupy 0..n-1; the UNK word sits at
/// index n, one past the last real word, so `size()` is n + 1.
class Vocabulary {
 public:
  static constexpr std::string_view kDefaultUnk = "<UNK>";

  Vocabulary() : Vocabulary(std::vector<std::string>{}) {}
  /// Throws InvariantError on duplicate words or a word equal to `unk`.
  explicit Vocabulary(std::vector<std::string> words, std::string unk = std::string(kDefaultUnk));

  std::size_t size() const noexcept { return words_.size() + 1; }
  std::size_t word_count() const noexcept { return words_.size(); }
  std::uint32_t unk_index() const noexcept { return static_cast<std::uint32_t>(words_.size()); }
  const std::string& unk() const noexcept { return unk_; }

  /// Index of `word`, or unk_index() when it is not indexed.
  std::uint32_t lookup(std::string_view word) const;
  bool contains(std::string_view word) const { return lookup(word) != unk_index(); }
  /// Inverse of lookup(); unk_index() maps to the UNK word.
  const std::string& word(std::uint32_t index) const;
  const std::vector<std::string>& words() const noexcept { return words_; }

  /// FNV-1a over the word list and UNK token. Stores built against
  /// different vocabularies never share a fingerprint in practice.
  std::uint64_t fingerprint() const noexcept;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.unk_ == b.unk_ && a.words_ == b.words_;
  }

 private:
  std::vector<std::string> words_;
  std::string unk_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Lowercases, strips punctuation and splits on whitespace.
std::vector<std::string> tokenize(std::string_view sentence);

FeatureTable load_features(const std::filesystem::path& path, std::size_t feature_dim);
void save_features(const FeatureTable& table, const std::filesystem::path& path);

/// An empty file yields an empty table. Stories with a number of images other
/// than five raise StructureError naming the story.
AnnotationTable load_annotations(const std::filesystem::path& path);
void save_annotations(const AnnotationTable& table, const std::filesystem::path& path);

using WordCounts = std::map<std::string, std::size_t, std::less<>>;

/// Token occurrences over every sentence of every story.
WordCounts count_words(const AnnotationTable& annotations);

/// Words with count >= min_count, ordered by descending count and then
/// lexicographically. Throws DomainError when min_count is zero.
Vocabulary build_vocabulary(const WordCounts& counts, std::size_t min_count);
Vocabulary build_vocabulary(const AnnotationTable& annotations, std::size_t min_count);

Vocabulary load_vocabulary(const std::filesystem::path& path);
void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path);

}  // namespace xmr
