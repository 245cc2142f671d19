#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xmr/types.hpp"

namespace xmr::detail {

/// Position of an item in the global header order (descending support,
/// ascending item id on ties). Lower rank means more frequent.
using Rank = std::uint32_t;

/// Multiset of rank paths, each strictly ascending, stored flat.
struct WeightedPaths {
  std::vector<Rank> flat;
  std::vector<std::size_t> offsets{0};
  std::vector<Count> weights;

  std::size_t size() const noexcept { return weights.size(); }
  bool empty() const noexcept { return weights.empty(); }
  std::span<const Rank> path(std::size_t i) const {
    return std::span<const Rank>(flat).subspan(offsets[i], offsets[i + 1] - offsets[i]);
  }
  void add(std::span<const Rank> path, Count weight);
};

struct FpNode {
  Rank rank = 0;
  Count count = 0;
  std::int32_t parent = -1;
  std::int32_t next_same = -1;
  bool has_child = false;
};

/// Prefix tree over rank paths. Node 0 is the root. Every root-to-node path
/// lists ranks in ascending order, and the nodes of one rank are chained
/// through `next_same` starting at head(rank).
class FpTree {
 public:
  /// `rank_limit` bounds the ranks that may appear in `paths`.
  FpTree(const WeightedPaths& paths, Rank rank_limit);

  bool empty() const noexcept { return nodes_.size() == 1; }
  /// No node has more than one child.
  bool single_path() const noexcept { return single_path_; }

  /// Ranks present in the tree, ascending.
  const std::vector<Rank>& ranks() const noexcept { return ranks_; }
  Count support(Rank rank) const noexcept { return support_[rank]; }
  std::int32_t head(Rank rank) const noexcept { return head_[rank]; }
  const std::vector<FpNode>& nodes() const noexcept { return nodes_; }

  /// Prefix paths of every `rank` node, weighted by that node's count, with
  /// ranks whose conditional support falls below `supp_min` removed.
  /// `scratch` must be zero-filled and at least `rank` long; it is left
  /// zero-filled on return.
  WeightedPaths conditional_base(Rank rank, Count supp_min, std::vector<Count>& scratch) const;

 private:
  std::vector<FpNode> nodes_;
  std::vector<std::int32_t> head_;
  std::vector<Count> support_;
  std::vector<Rank> ranks_;
  bool single_path_ = true;
};

}  // namespace xmr::detail
