#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace xmr {

/// Item id. Visual items are filter indices in [0, D); word items are
/// vocabulary indices offset by D.
using Item = std::uint32_t;

/// Support count (number of transactions).
using Count = std::uint32_t;

using Itemset = std::vector<Item>;
using ItemSpan = std::span<const Item>;

/// Items of `needle` all occur in `haystack`; both strictly ascending.
bool contains_all(ItemSpan haystack, ItemSpan needle) noexcept;

bool is_strictly_ascending(ItemSpan items) noexcept;

}  // namespace xmr
