#include "xmr/inference.hpp"

#include <algorithm>
#include <unordered_map>

#include "jsonl.hpp"
#include "xmr/error.hpp"

namespace xmr {

std::vector<std::string> ConceptSet::words() const {
  std::vector<std::string> out;
  out.reserve(concepts.size());
  for (const auto& c : concepts) out.push_back(c.word);
  return out;
}

RuleIndex::RuleIndex(const RuleStore& store) : store_(&store), by_first_item_(store.feature_dim()) {
  const auto entries = store.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) by_first_item_[entries[i].rule.antecedent.front()].push_back(i);
}

ImageConcepts RuleIndex::infer_image(const Transaction& image) const {
  const std::size_t dim = store_->feature_dim();
  if (image.origin != Origin::image) {
    throw OriginError("inference needs an image transaction, got " + std::string(to_string(image.origin)));
  }
  if (!image.items.empty() && image.items.back() >= dim) {
    throw OriginError("image transaction '" + image.source_id + "' holds item " + std::to_string(image.items.back()) +
                      " >= feature_dim " + std::to_string(dim));
  }

  const auto entries = store_->entries();
  std::vector<std::size_t> fired;
  for (const Item item : image.items) {
    for (const std::size_t idx : by_first_item_[item]) {
      if (contains_all(image.items, entries[idx].rule.antecedent)) fired.push_back(idx);
    }
  }
  std::sort(fired.begin(), fired.end(), [&](std::size_t a, std::size_t b) {
    return entries[a].word != entries[b].word ? entries[a].word < entries[b].word : a < b;
  });

  ImageConcepts out;
  for (const std::size_t idx : fired) {
    const auto& e = entries[idx];
    if (out.empty() || out.back().word != e.word) out.push_back({e.word, {}});
    out.back().rules.push_back({e.rule.antecedent, e.rule.consequent, e.rule.joint, e.rule.ante});
  }
  return out;
}

ConceptSet RuleIndex::infer_stream(std::string story_id, std::span<const Transaction> images) const {
  if (images.size() != kStreamLength) {
    throw ArityError("stream '" + story_id + "' has " + std::to_string(images.size()) + " images, expected " +
                     std::to_string(kStreamLength));
  }
  ConceptSet set;
  set.story_id = std::move(story_id);
  std::unordered_map<std::string, std::size_t> position;
  for (const auto& image : images) {
    auto& words = set.image_words.emplace_back();
    for (auto& concept_ : infer_image(image)) {
      words.push_back(concept_.word);
      const auto [it, inserted] = position.try_emplace(concept_.word, set.concepts.size());
      if (inserted) {
        set.concepts.push_back(std::move(concept_));
        continue;
      }
      auto& rules = set.concepts[it->second].rules;
      for (auto& r : concept_.rules) {
        if (std::find(rules.begin(), rules.end(), r) == rules.end()) rules.push_back(std::move(r));
      }
    }
  }
  return set;
}

ImageConcepts infer_image(const Transaction& image, const RuleStore& store) {
  return RuleIndex(store).infer_image(image);
}

ConceptSet infer_stream(std::string story_id, std::span<const Transaction> images, const RuleStore& store) {
  return RuleIndex(store).infer_stream(std::move(story_id), images);
}

void write_concept_line(std::ostream& os, const ConceptSet& set, bool with_provenance, bool with_image_words) {
  detail::Json line;
  line["story_id"] = set.story_id;
  line["concepts"] = set.words();
  if (with_provenance) {
    auto& prov = line["provenance"] = detail::Json::object();
    for (const auto& c : set.concepts) {
      auto& list = prov[c.word] = detail::Json::array();
      for (const auto& r : c.rules) {
        list.push_back(detail::Json{{"antecedent", r.antecedent}, {"confidence", {r.joint, r.ante}}});
      }
    }
  }
  if (with_image_words) line["images"] = set.image_words;
  os << line.dump() << '\n';
}

}  // namespace xmr
