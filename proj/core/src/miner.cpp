#include "xmr/miner.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "fp_tree.hpp"
#include "jsonl.hpp"
#include "xmr/error.hpp"
#include "xmr/parallel.hpp"

namespace xmr {

using detail::FpTree;
using detail::Rank;
using detail::WeightedPaths;

FrequentItemsetTable::FrequentItemsetTable(std::vector<FrequentItemset> itemsets, std::size_t total_transactions)
    : itemsets_(std::move(itemsets)), total_(total_transactions) {
  std::sort(itemsets_.begin(), itemsets_.end(),
            [](const FrequentItemset& a, const FrequentItemset& b) { return a.items < b.items; });
  const auto dup = std::adjacent_find(itemsets_.begin(), itemsets_.end(),
                                      [](const auto& a, const auto& b) { return a.items == b.items; });
  if (dup != itemsets_.end()) throw InvariantError("duplicate itemset in frequent itemset table");
}

std::optional<Count> FrequentItemsetTable::find(ItemSpan items) const {
  const auto it = std::lower_bound(itemsets_.begin(), itemsets_.end(), items, [](const FrequentItemset& f, ItemSpan key) {
    return std::lexicographical_compare(f.items.begin(), f.items.end(), key.begin(), key.end());
  });
  if (it == itemsets_.end() || !std::equal(it->items.begin(), it->items.end(), items.begin(), items.end())) {
    return std::nullopt;
  }
  return it->support;
}

bool FrequentItemsetTable::is_downward_closed() const {
  // Checking every (n-1)-subset is enough: each subset is itself checked.
  Itemset sub;
  for (const auto& f : itemsets_) {
    if (f.items.size() < 2) continue;
    for (std::size_t skip = 0; skip < f.items.size(); ++skip) {
      sub.clear();
      for (std::size_t i = 0; i < f.items.size(); ++i) {
        if (i != skip) sub.push_back(f.items[i]);
      }
      const auto s = find(sub);
      if (!s || *s < f.support) return false;
    }
  }
  return true;
}

SupportResult support(ItemSpan itemset, std::span<const Transaction> transactions) {
  Count count = 0;
  for (const auto& t : transactions) {
    if (contains_all(t.items, itemset)) ++count;
  }
  if (transactions.empty()) return {0, Rational(0, 1)};
  return {count, Rational(count, transactions.size())};
}

namespace {

class GrowthContext {
 public:
  GrowthContext(const MineOptions& options, std::vector<Item> rank_to_item)
      : options_(options), rank_to_item_(std::move(rank_to_item)) {
    if (options_.cap) {
      is_capped_.resize(rank_to_item_.size());
      for (std::size_t r = 0; r < rank_to_item_.size(); ++r) {
        is_capped_[r] = rank_to_item_[r] >= options_.cap->first_item;
      }
    }
  }

  std::size_t rank_count() const noexcept { return rank_to_item_.size(); }
  Count supp_min() const noexcept { return options_.supp_min; }

  std::size_t capped(Rank r) const noexcept { return options_.cap && is_capped_[r] ? 1 : 0; }
  bool within_cap(std::size_t capped_items) const noexcept {
    return !options_.cap || capped_items <= options_.cap->max_items;
  }
  bool can_extend(std::size_t length) const noexcept { return !options_.max_len || length < *options_.max_len; }
  std::size_t length_budget() const noexcept {
    return options_.max_len ? *options_.max_len : std::numeric_limits<std::size_t>::max();
  }

  void emit(std::span<const Rank> pattern, Count support, std::vector<FrequentItemset>& out) const {
    FrequentItemset f;
    f.items.reserve(pattern.size());
    for (const Rank r : pattern) f.items.push_back(rank_to_item_[r]);
    std::sort(f.items.begin(), f.items.end());
    f.support = support;
    out.push_back(std::move(f));
  }

 private:
  const MineOptions& options_;
  std::vector<Item> rank_to_item_;
  std::vector<bool> is_capped_;
};

struct Pattern {
  std::vector<Rank> ranks;
  std::size_t capped = 0;
};

// Every non-empty combination of a single-path tree's nodes, appended to
// `suffix`. The support of a combination is the count of its deepest node.
void emit_single_path(const FpTree& tree, const Pattern& suffix, const GrowthContext& ctx,
                      std::vector<FrequentItemset>& out) {
  std::vector<Rank> ranks;
  std::vector<Count> counts;
  for (std::size_t n = 1; n < tree.nodes().size(); ++n) {
    ranks.push_back(tree.nodes()[n].rank);
    counts.push_back(tree.nodes()[n].count);
  }
  const std::size_t budget = ctx.length_budget();

  std::vector<Rank> pattern;
  std::vector<std::size_t> picks;
  for (std::size_t deepest = 0; deepest < ranks.size(); ++deepest) {
    const std::size_t base_capped = suffix.capped + ctx.capped(ranks[deepest]);
    if (!ctx.within_cap(base_capped) || suffix.ranks.size() + 1 > budget) continue;

    pattern = suffix.ranks;
    pattern.push_back(ranks[deepest]);
    ctx.emit(pattern, counts[deepest], out);

    // Subsets of the nodes above `deepest`, enumerated with an index stack.
    picks.clear();
    std::size_t capped = base_capped;
    std::size_t i = 0;
    while (true) {
      if (i < deepest && pattern.size() < budget) {
        if (ctx.within_cap(capped + ctx.capped(ranks[i]))) {
          picks.push_back(i);
          capped += ctx.capped(ranks[i]);
          pattern.push_back(ranks[i]);
          ctx.emit(pattern, counts[deepest], out);
        }
        ++i;
        continue;
      }
      if (picks.empty()) break;
      const std::size_t last = picks.back();
      picks.pop_back();
      pattern.pop_back();
      capped -= ctx.capped(ranks[last]);
      i = last + 1;
    }
  }
}

struct Frame {
  FpTree tree;
  Pattern suffix;
  std::size_t cursor = 0;
};

// Grows every pattern whose suffix is `root` using `tree` (the conditional
// tree of `root`). Explicit stack instead of recursion.
void grow(FpTree tree, Pattern root, const GrowthContext& ctx, std::vector<Count>& scratch,
          std::vector<FrequentItemset>& out) {
  if (tree.empty()) return;
  if (tree.single_path()) {
    emit_single_path(tree, root, ctx, out);
    return;
  }
  std::vector<Frame> stack;
  stack.push_back(Frame{std::move(tree), std::move(root), 0});
  while (!stack.empty()) {
    Frame& frame = stack.back();
    const auto& ranks = frame.tree.ranks();
    if (frame.cursor == ranks.size()) {
      stack.pop_back();
      continue;
    }
    // Least frequent first; its conditional base holds only lower ranks.
    const Rank rank = ranks[ranks.size() - 1 - frame.cursor];
    ++frame.cursor;

    Pattern pattern{frame.suffix.ranks, frame.suffix.capped + ctx.capped(rank)};
    if (!ctx.within_cap(pattern.capped)) continue;
    pattern.ranks.push_back(rank);
    ctx.emit(pattern.ranks, frame.tree.support(rank), out);
    if (!ctx.can_extend(pattern.ranks.size())) continue;

    WeightedPaths base = frame.tree.conditional_base(rank, ctx.supp_min(), scratch);
    if (base.empty()) continue;
    FpTree child(base, rank);
    if (child.single_path()) {
      emit_single_path(child, pattern, ctx, out);
    } else {
      stack.push_back(Frame{std::move(child), std::move(pattern), 0});  // invalidates `frame`
    }
  }
}

}  // namespace

FrequentItemsetTable mine_frequent(std::span<const Transaction> transactions, const MineOptions& options) {
  if (options.supp_min < 1) throw DomainError("supp_min must be at least 1");
  if (options.max_len && *options.max_len == 0) throw DomainError("max_len must be at least 1");

  std::map<Item, Count> frequency;
  for (const auto& t : transactions) {
    for (const Item item : t.items) ++frequency[item];
  }
  std::vector<std::pair<Item, Count>> frequent;
  for (const auto& [item, count] : frequency) {
    if (count >= options.supp_min) frequent.emplace_back(item, count);
  }
  std::stable_sort(frequent.begin(), frequent.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<Item> rank_to_item;
  std::map<Item, Rank> item_to_rank;
  for (const auto& [item, count] : frequent) {
    item_to_rank.emplace(item, static_cast<Rank>(rank_to_item.size()));
    rank_to_item.push_back(item);
  }
  const auto rank_count = static_cast<Rank>(rank_to_item.size());

  WeightedPaths paths;
  std::vector<Rank> path;
  for (const auto& t : transactions) {
    path.clear();
    for (const Item item : t.items) {
      if (const auto it = item_to_rank.find(item); it != item_to_rank.end()) path.push_back(it->second);
    }
    if (path.empty()) continue;
    std::sort(path.begin(), path.end());
    path.erase(std::unique(path.begin(), path.end()), path.end());
    paths.add(path, 1);
  }
  const FpTree global(paths, rank_count);
  const GrowthContext ctx(options, std::move(rank_to_item));

  const unsigned workers = std::max(1u, std::min<unsigned>(resolve_threads(options.threads), rank_count));
  std::vector<std::vector<FrequentItemset>> results(workers);
  std::vector<std::vector<Count>> scratch(workers, std::vector<Count>(rank_count, 0));

  // Each header rank of the global tree is an independent job.
  parallel_for(global.ranks().size(), workers, [&](unsigned worker, std::size_t job) {
    const Rank rank = global.ranks()[job];
    Pattern pattern{{rank}, ctx.capped(rank)};
    if (!ctx.within_cap(pattern.capped)) return;
    ctx.emit(pattern.ranks, global.support(rank), results[worker]);
    if (!ctx.can_extend(1)) return;
    WeightedPaths base = global.conditional_base(rank, ctx.supp_min(), scratch[worker]);
    if (base.empty()) return;
    grow(FpTree(base, rank), std::move(pattern), ctx, scratch[worker], results[worker]);
  });

  std::size_t total = 0;
  for (const auto& r : results) total += r.size();
  std::vector<FrequentItemset> all;
  all.reserve(total);
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(all));
  return FrequentItemsetTable(std::move(all), transactions.size());
}

FrequentItemsetTable mine_frequent_bruteforce(std::span<const Transaction> transactions,
                                              const MineOptions& options) {
  if (options.supp_min < 1) throw DomainError("supp_min must be at least 1");
  std::vector<Item> universe;
  for (const auto& t : transactions) universe.insert(universe.end(), t.items.begin(), t.items.end());
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  if (universe.size() > kBruteForceMaxItems) {
    throw GuardError("brute-force enumeration over " + std::to_string(universe.size()) +
                     " distinct items exceeds the limit of " + std::to_string(kBruteForceMaxItems));
  }

  std::vector<FrequentItemset> out;
  Itemset candidate;
  const std::uint64_t limit = std::uint64_t{1} << universe.size();
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (options.max_len && size > *options.max_len) continue;
    candidate.clear();
    std::size_t capped = 0;
    for (std::size_t b = 0; b < universe.size(); ++b) {
      if (mask >> b & 1) {
        candidate.push_back(universe[b]);
        if (options.cap && universe[b] >= options.cap->first_item) ++capped;
      }
    }
    if (options.cap && capped > options.cap->max_items) continue;
    const Count count = support(candidate, transactions).count;
    if (count >= options.supp_min) out.push_back({candidate, count});
  }
  return FrequentItemsetTable(std::move(out), transactions.size());
}

void save_itemsets(const FrequentItemsetTable& table, const std::filesystem::path& path) {
  std::string out;
  for (const auto& f : table) {
    out += detail::Json{{"items", f.items}, {"support", f.support}}.dump();
    out += '\n';
  }
  detail::write_text(path, out);
}

}  // namespace xmr
