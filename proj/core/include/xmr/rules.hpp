#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xmr/ingest.hpp"
#include "xmr/miner.hpp"
#include "xmr/rational.hpp"
#include "xmr/transactions.hpp"
#include "xmr/types.hpp"

namespace xmr {

/// Visual itemset => word item.
struct CrossModalRule {
  Itemset antecedent;
  Item consequent = 0;
  Count joint = 0;  ///< support of antecedent plus consequent
  Count ante = 0;   ///< support of the antecedent alone

  Rational confidence() const { return Rational(joint, ante); }

  friend bool operator==(const CrossModalRule&, const CrossModalRule&) = default;
};

struct Provenance {
  std::string tag;
  Count joint = 0;
  Count ante = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct RuleEntry {
  CrossModalRule rule;
  std::string word;
  std::vector<Provenance> provenance;

  friend bool operator==(const RuleEntry&, const RuleEntry&) = default;
};

/// Compatibility key for stores: rules can only be joined when the
/// feature dimension and vocabulary agree.
struct StoreContext {
  std::size_t feature_dim = 0;
  std::size_t vocab_size = 0;
  std::uint64_t vocab_fingerprint = 0;

  static StoreContext from(std::size_t feature_dim, const Vocabulary& vocab) {
    return {feature_dim, vocab.size(), vocab.fingerprint()};
  }
  friend bool operator==(const StoreContext&, const StoreContext&) = default;
};

/// Throws DomainError unless 0 < joint <= ante.
Rational confidence(Count joint, Count ante);

/// Throws InvariantError when the rule breaks a modality, ordering or count
/// invariant for the given context.
void validate_rule(const CrossModalRule& rule, const StoreContext& context);

/// Immutable, sorted collection of cross-modal rules. Entries are ordered
/// by (antecedent, consequent) so all rules sharing an antecedent are
/// contiguous.
class RuleStore {
 public:
  explicit RuleStore(StoreContext context) : context_(context) {}
  /// Validates and sorts. Throws InvariantError on a duplicate key.
  RuleStore(StoreContext context, std::vector<RuleEntry> entries,
            std::optional<Thresholds> thresholds = std::nullopt);

  const StoreContext& context() const noexcept { return context_; }
  std::size_t feature_dim() const noexcept { return context_.feature_dim; }
  /// Thresholds the rules were generated with; unset after merging stores
  /// built with different thresholds.
  const std::optional<Thresholds>& thresholds() const noexcept { return thresholds_; }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::span<const RuleEntry> entries() const noexcept { return entries_; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  const RuleEntry* find(ItemSpan antecedent, Item consequent) const;
  std::span<const RuleEntry> with_antecedent(ItemSpan antecedent) const;

  /// Number of distinct consequent words.
  std::size_t concept_count() const;

  friend bool operator==(const RuleStore&, const RuleStore&) = default;

 private:
  StoreContext context_;
  std::vector<RuleEntry> entries_;
  std::optional<Thresholds> thresholds_;
};

struct RuleGenOptions {
  Thresholds thresholds;
  std::string tag = "default";
  unsigned threads = 1;
};

/// Emits (Z minus w) => w for every frequent Z holding exactly one word item
/// w and at least one visual item, when the thresholds pass. Throws
/// ClosureError if an antecedent is missing from `frequent`.
RuleStore generate_rules(const FrequentItemsetTable& frequent, std::size_t feature_dim,
                         const Vocabulary& vocab, const RuleGenOptions& options);

/// Union of two stores. On a key collision the higher-confidence entry
/// wins (then the larger joint support, then `a`) and provenance lists
/// are concatenated a-first. Throws IncompatibleStoreError on differing
/// feature_dim, RemapRequiredError on differing vocabularies.
RuleStore merge_stores(const RuleStore& a, const RuleStore& b);

inline constexpr int kRuleFormatVersion = 1;

void save_store(const RuleStore& store, const std::filesystem::path& path);
/// Throws FormatVersionError for a foreign format or version, ParseError
/// (with byte offset) for malformed or truncated content, InvariantError
/// for rules that break the modality constraints.
RuleStore load_store(const std::filesystem::path& path);

}  // namespace xmr
