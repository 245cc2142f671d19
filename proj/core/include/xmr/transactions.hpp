#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xmr/ingest.hpp"
#include "xmr/rational.hpp"
#include "xmr/text_filter.hpp"
#include "xmr/types.hpp"

namespace xmr {

enum class Origin { image, text, cross_modal };

std::string_view to_string(Origin origin) noexcept;

struct Transaction {
  /// Strictly ascending.
  Itemset items;
  Origin origin = Origin::cross_modal;
  std::string source_id;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

/// Support and confidence thresholds. Comparisons are inclusive (>=)
/// unless `strict` is set.
struct Thresholds {
  Count supp_min = 3;
  Rational conf_min{3, 5};
  bool strict = false;

  bool passes_support(Count support) const noexcept {
    return strict ? support > supp_min : support >= supp_min;
  }
  bool passes_confidence(const Rational& conf) const noexcept {
    return strict ? conf > conf_min : conf >= conf_min;
  }
  /// Smallest support count that passes.
  Count effective_supp_min() const noexcept { return strict ? supp_min + 1 : supp_min; }

  /// Throws DomainError unless supp_min >= 1 and 0 < conf_min <= 1.
  void validate() const;

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

struct MiningParams {
  std::size_t top_k = 10;
  Thresholds thresholds;
  std::optional<std::size_t> max_len;

  void validate() const;
};

struct TransactionDatabase {
  std::vector<Transaction> transactions;
  std::size_t feature_dim = 0;
  std::size_t vocab_size = 0;
  std::size_t top_k = 0;
  /// Present when the database was built in-process; absent after loading
  /// from a transaction file.
  std::shared_ptr<const Vocabulary> vocab;

  std::size_t size() const noexcept { return transactions.size(); }
  bool empty() const noexcept { return transactions.empty(); }

  /// Throws InvariantError when an item is out of [0, D + v) or a
  /// transaction is not strictly ascending.
  void validate() const;
};

/// Indices of the `top_k` largest-magnitude activations, ascending. Ties go
/// to the smaller index. Throws EmptyInputError on an empty vector.
Transaction build_image_transaction(std::span<const float> activation, std::size_t top_k);

/// Each indexed, non-UNK word becomes item (index + D). Other words are
/// dropped.
Transaction build_text_transaction(std::span<const std::string> words, const Vocabulary& vocab,
                                   std::size_t feature_dim);

/// Sorted union of an image-origin and a text-origin transaction. Throws
/// OriginError for any other combination.
Transaction build_cross_modal_transaction(const Transaction& image, const Transaction& text);

/// One cross-modal transaction per annotated image, in order of first
/// appearance. An image's text part pools the words of every story that
/// shows it. Throws JoinError when an annotated image has no features.
TransactionDatabase build_database(const FeatureTable& features, const AnnotationTable& annotations,
                                   std::shared_ptr<const Vocabulary> vocab, const MiningParams& params,
                                   TextMode mode = TextMode::passthrough);

/// Vocabulary built over normalized tokens, so heuristic-mode lemmas are the
/// indexed words.
Vocabulary build_vocabulary(const AnnotationTable& annotations, std::size_t min_count, TextMode mode);

void save_database(const TransactionDatabase& db, const std::filesystem::path& path);
TransactionDatabase load_database(const std::filesystem::path& path);

}  // namespace xmr
