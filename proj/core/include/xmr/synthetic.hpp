#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "xmr/eval.hpp"
#include "xmr/ingest.hpp"
#include "xmr/transactions.hpp"

namespace xmr::synthetic {

/// Ground truth for one planted rule: visual item `visual` appears in
/// exactly `ante` transactions and word item `word` in exactly `joint` of
/// them (and nowhere else).
struct PlantedRule {
  Item visual = 0;
  Item word = 0;
  Count joint = 0;
  Count ante = 0;

  /// True when {visual} => word clears `t`.
  bool passes(const Thresholds& t) const;
};

struct GeneratorConfig {
  std::size_t transactions = 500;
  std::size_t rules = 20;
  std::size_t feature_dim = 2048;
  std::size_t top_k = 4;
  std::size_t filler_pool = 64;
  Count min_ante = 4;
  Count max_ante = 16;
  std::uint64_t seed = 1;
};

/// Transactions carrying a planted item and its word get filler items
/// used nowhere else, so at supp_min >= 2 the planted rules are the only
/// rules present. Other transactions draw fillers from a shared pool and
/// carry no words.
struct PlantedCorpus {
  GeneratorConfig config;
  TransactionDatabase db;
  std::vector<PlantedRule> planted;
  std::shared_ptr<const Vocabulary> vocab;

  /// Planted rules that clear `t`, as (visual, word) pairs.
  std::vector<PlantedRule> expected_rules(const Thresholds& t) const;

  /// Consecutive groups of five image parts with their words as labels.
  std::vector<EvalStream> streams() const;
};

/// Throws DomainError when the configuration cannot host the planted rules
/// (too few transactions, or not enough distinct filler items below D).
PlantedCorpus generate(const GeneratorConfig& config);

/// Writes features/annotations files that rebuild the corpus's images and
/// words. Each sentence also carries a token that occurs once, so a
/// vocabulary with min_count >= 2 drops it.
void write_files(const PlantedCorpus& corpus, const std::filesystem::path& features,
                 const std::filesystem::path& annotations);

/// Uniform random database over items [0, n_items).
std::vector<Transaction> random_database(std::uint64_t seed, std::size_t max_transactions,
                                         std::size_t n_items, std::size_t max_width);

}  // namespace xmr::synthetic
