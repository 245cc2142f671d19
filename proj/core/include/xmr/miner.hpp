#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "xmr/rational.hpp"
#include "xmr/transactions.hpp"
#include "xmr/types.hpp"

namespace xmr {

struct FrequentItemset {
  Itemset items;
  Count support = 0;

  friend bool operator==(const FrequentItemset&, const FrequentItemset&) = default;
};

/// Frequent itemsets sorted lexicographically by item list, so iteration
/// order is reproducible and lookup is a binary search.
class FrequentItemsetTable {
 public:
  FrequentItemsetTable() = default;
  /// Sorts `itemsets`. Throws InvariantError on duplicates.
  FrequentItemsetTable(std::vector<FrequentItemset> itemsets, std::size_t total_transactions);

  std::size_t size() const noexcept { return itemsets_.size(); }
  bool empty() const noexcept { return itemsets_.empty(); }
  std::size_t total_transactions() const noexcept { return total_; }

  const std::vector<FrequentItemset>& itemsets() const noexcept { return itemsets_; }
  auto begin() const noexcept { return itemsets_.begin(); }
  auto end() const noexcept { return itemsets_.end(); }

  std::optional<Count> find(ItemSpan items) const;

  /// Every non-empty proper subset of a stored itemset is stored with a
  /// support no smaller than the superset's. Exponential in itemset size.
  bool is_downward_closed() const;

  friend bool operator==(const FrequentItemsetTable&, const FrequentItemsetTable&) = default;

 private:
  std::vector<FrequentItemset> itemsets_;
  std::size_t total_ = 0;
};

/// Anti-monotone cap on the number of items at or above `first_item`
/// (word items, when `first_item` is D). Patterns exceeding it and all of
/// their supersets are skipped during growth.
struct ModalityCap {
  Item first_item = 0;
  std::size_t max_items = 1;
};

struct MineOptions {
  Count supp_min = 1;
  std::optional<std::size_t> max_len;
  std::optional<ModalityCap> cap;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 1;
};

struct SupportResult {
  Count count = 0;
  /// count / m; 0/1 on an empty database.
  Rational fraction;
};

SupportResult support(ItemSpan itemset, std::span<const Transaction> transactions);

/// FP-Growth. Output is identical for every thread count and transaction
/// order.
FrequentItemsetTable mine_frequent(std::span<const Transaction> transactions, const MineOptions& options);

inline constexpr std::size_t kBruteForceMaxItems = 24;

/// Reference enumerator with the same contract as mine_frequent(). Throws
/// GuardError when more than kBruteForceMaxItems distinct items occur.
FrequentItemsetTable mine_frequent_bruteforce(std::span<const Transaction> transactions,
                                              const MineOptions& options);

void save_itemsets(const FrequentItemsetTable& table, const std::filesystem::path& path);

}  // namespace xmr
