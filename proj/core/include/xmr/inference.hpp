#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "xmr/rules.hpp"
#include "xmr/transactions.hpp"

namespace xmr {

/// A rule that fired for an image.
struct FiredRule {
  Itemset antecedent;
  Item consequent = 0;
  Count joint = 0;
  Count ante = 0;

  friend bool operator==(const FiredRule&, const FiredRule&) = default;
};

struct InferredConcept {
  std::string word;
  std::vector<FiredRule> rules;

  friend bool operator==(const InferredConcept&, const InferredConcept&) = default;
};

/// Concepts of one image, sorted by word.
using ImageConcepts = std::vector<InferredConcept>;

struct ConceptSet {
  std::string story_id;
  /// First-inference order across the stream's images; words first
  /// inferred by the same image are in lexicographic order.
  std::vector<InferredConcept> concepts;
  /// Words inferred per image, in stream order.
  std::vector<std::vector<std::string>> image_words;

  std::vector<std::string> words() const;

  friend bool operator==(const ConceptSet&, const ConceptSet&) = default;
};

/// Rules bucketed by the first antecedent item. A query walks the buckets
/// of the image's items and checks full containment.
class RuleIndex {
 public:
  explicit RuleIndex(const RuleStore& store);

  const RuleStore& store() const noexcept { return *store_; }

  /// Throws OriginError unless `image` is image-origin with every item < D.
  ImageConcepts infer_image(const Transaction& image) const;

  /// Throws ArityError unless exactly five images are given.
  ConceptSet infer_stream(std::string story_id, std::span<const Transaction> images) const;

 private:
  const RuleStore* store_;
  std::vector<std::vector<std::size_t>> by_first_item_;
};

ImageConcepts infer_image(const Transaction& image, const RuleStore& store);
ConceptSet infer_stream(std::string story_id, std::span<const Transaction> images, const RuleStore& store);

/// One JSON line: {"story_id", "concepts", "provenance"?, "images"?}.
void write_concept_line(std::ostream& os, const ConceptSet& set, bool with_provenance,
                        bool with_image_words);

}  // namespace xmr
