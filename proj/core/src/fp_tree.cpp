#include "fp_tree.hpp"

#include <algorithm>
#include <numeric>

namespace xmr::detail {

void WeightedPaths::add(std::span<const Rank> path, Count weight) {
  flat.insert(flat.end(), path.begin(), path.end());
  offsets.push_back(flat.size());
  weights.push_back(weight);
}

FpTree::FpTree(const WeightedPaths& paths, Rank rank_limit)
    : head_(rank_limit, -1), support_(rank_limit, 0) {
  nodes_.emplace_back();

  // Sorted insertion: consecutive paths share their longest common prefix,
  // so the trie is built by following the previous path instead of
  // searching children.
  std::vector<std::size_t> order(paths.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto pa = paths.path(a);
    const auto pb = paths.path(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  });

  std::vector<std::int32_t> trail;  // node ids along the previous path
  std::span<const Rank> previous;
  for (const std::size_t idx : order) {
    const auto path = paths.path(idx);
    const Count weight = paths.weights[idx];
    if (path.empty() || weight == 0) continue;

    std::size_t common = 0;
    while (common < path.size() && common < previous.size() && path[common] == previous[common]) ++common;
    trail.resize(common);
    for (std::size_t i = 0; i < common; ++i) nodes_[trail[i]].count += weight;
    for (std::size_t i = common; i < path.size(); ++i) {
      const std::int32_t parent = i == 0 ? 0 : trail[i - 1];
      if (nodes_[parent].has_child) single_path_ = false;
      nodes_[parent].has_child = true;
      const Rank rank = path[i];
      FpNode node;
      node.rank = rank;
      node.count = weight;
      node.parent = parent;
      node.next_same = head_[rank];
      const auto id = static_cast<std::int32_t>(nodes_.size());
      head_[rank] = id;
      nodes_.push_back(node);
      trail.push_back(id);
    }
    for (const Rank rank : path) support_[rank] += weight;
    previous = path;
  }

  for (Rank r = 0; r < rank_limit; ++r) {
    if (support_[r] > 0) ranks_.push_back(r);
  }
}

WeightedPaths FpTree::conditional_base(Rank rank, Count supp_min, std::vector<Count>& scratch) const {
  std::vector<Rank> touched;
  for (std::int32_t n = head_[rank]; n != -1; n = nodes_[n].next_same) {
    const Count weight = nodes_[n].count;
    for (std::int32_t p = nodes_[n].parent; p != 0; p = nodes_[p].parent) {
      const Rank r = nodes_[p].rank;
      if (scratch[r] == 0) touched.push_back(r);
      scratch[r] += weight;
    }
  }

  WeightedPaths base;
  std::vector<Rank> path;
  for (std::int32_t n = head_[rank]; n != -1; n = nodes_[n].next_same) {
    path.clear();
    for (std::int32_t p = nodes_[n].parent; p != 0; p = nodes_[p].parent) {
      if (scratch[nodes_[p].rank] >= supp_min) path.push_back(nodes_[p].rank);
    }
    if (path.empty()) continue;
    std::reverse(path.begin(), path.end());
    base.add(path, nodes_[n].count);
  }

  for (const Rank r : touched) scratch[r] = 0;
  return base;
}

}  // namespace xmr::detail
