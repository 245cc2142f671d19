#include "xmr/transactions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "jsonl.hpp"
#include "xmr/error.hpp"

namespace xmr {

using detail::Json;

std::string_view to_string(Origin origin) noexcept {
  switch (origin) {
    case Origin::image:
      return "image";
    case Origin::text:
      return "text";
    case Origin::cross_modal:
      return "cross-modal";
  }
  return "unknown";
}

void Thresholds::validate() const {
  if (supp_min < 1) throw DomainError("supp_min must be at least 1");
  if (conf_min.num() == 0 || conf_min > Rational(1, 1)) {
    throw DomainError("conf_min must lie in (0, 1], got " + conf_min.to_string());
  }
}

void MiningParams::validate() const {
  if (top_k < 1) throw DomainError("top_k must be at least 1");
  if (max_len && *max_len < 1) throw DomainError("max_len must be at least 1");
  thresholds.validate();
}

void TransactionDatabase::validate() const {
  const std::size_t limit = feature_dim + vocab_size;
  for (const auto& t : transactions) {
    if (!is_strictly_ascending(t.items)) {
      throw InvariantError("transaction '" + t.source_id + "' is not strictly ascending");
    }
    if (!t.items.empty() && t.items.back() >= limit) {
      throw InvariantError("transaction '" + t.source_id + "' has item " + std::to_string(t.items.back()) +
                           " outside [0, " + std::to_string(limit) + ")");
    }
  }
}

Transaction build_image_transaction(std::span<const float> activation, std::size_t top_k) {
  if (activation.empty()) throw EmptyInputError("empty activation vector");
  if (top_k == 0) throw DomainError("top_k must be at least 1");
  const std::size_t k = std::min(top_k, activation.size());

  auto magnitude = [&](Item i) {
    const float v = activation[i];
    return std::isnan(v) ? -1.0f : std::fabs(v);
  };
  std::vector<Item> order(activation.size());
  std::iota(order.begin(), order.end(), Item{0});
  auto before = [&](Item a, Item b) {
    const float ma = magnitude(a);
    const float mb = magnitude(b);
    return ma != mb ? ma > mb : a < b;
  };
  if (k < order.size()) {
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k) - 1, order.end(), before);
  }
  order.resize(k);
  std::sort(order.begin(), order.end());
  return Transaction{std::move(order), Origin::image, {}};
}

Transaction build_text_transaction(std::span<const std::string> words, const Vocabulary& vocab,
                                   std::size_t feature_dim) {
  Itemset items;
  items.reserve(words.size());
  for (const auto& word : words) {
    const auto index = vocab.lookup(word);
    if (index != vocab.unk_index()) items.push_back(static_cast<Item>(index + feature_dim));
  }
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return Transaction{std::move(items), Origin::text, {}};
}

Transaction build_cross_modal_transaction(const Transaction& image, const Transaction& text) {
  if (image.origin != Origin::image || text.origin != Origin::text) {
    throw OriginError("cross-modal transaction needs an image part and a text part, got " +
                      std::string(to_string(image.origin)) + " and " + std::string(to_string(text.origin)));
  }
  Transaction out{{}, Origin::cross_modal, image.source_id.empty() ? text.source_id : image.source_id};
  out.items.reserve(image.items.size() + text.items.size());
  std::set_union(image.items.begin(), image.items.end(), text.items.begin(), text.items.end(),
                 std::back_inserter(out.items));
  return out;
}

TransactionDatabase build_database(const FeatureTable& features, const AnnotationTable& annotations,
                                   std::shared_ptr<const Vocabulary> vocab, const MiningParams& params,
                                   TextMode mode) {
  params.validate();
  if (!vocab) throw DomainError("build_database needs a vocabulary");

  // image id -> sentences from every story showing it, in first-seen order
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<std::vector<std::string>>> sentences;
  for (const auto& story : annotations.stories) {
    for (const auto& image : story.images) {
      if (!features.find(image.image_id)) {
        throw JoinError("story '" + story.story_id + "' references image '" + image.image_id +
                        "' with no features");
      }
      auto [it, inserted] = sentences.try_emplace(image.image_id);
      if (inserted) order.push_back(image.image_id);
      it->second.push_back(image.tokens);
    }
  }

  TransactionDatabase db;
  db.feature_dim = features.dim();
  db.vocab_size = vocab->size();
  db.top_k = params.top_k;
  db.transactions.reserve(order.size());
  for (const auto& id : order) {
    Transaction image = build_image_transaction(*features.find(id), params.top_k);
    image.source_id = id;
    const WordSet words = preprocess_tokens(sentences.at(id), mode);
    db.transactions.push_back(build_cross_modal_transaction(image, build_text_transaction(words, *vocab, db.feature_dim)));
  }
  db.vocab = std::move(vocab);
  return db;
}

Vocabulary build_vocabulary(const AnnotationTable& annotations, std::size_t min_count, TextMode mode) {
  if (mode == TextMode::passthrough) return build_vocabulary(annotations, min_count);
  WordCounts counts;
  for (const auto& story : annotations.stories) {
    for (const auto& image : story.images) {
      for (auto& word : normalize_tokens(image.tokens, mode)) ++counts[std::move(word)];
    }
  }
  return build_vocabulary(counts, min_count);
}

void save_database(const TransactionDatabase& db, const std::filesystem::path& path) {
  std::string out;
  out += Json{{"feature_dim", db.feature_dim}, {"vocab_size", db.vocab_size}, {"top_k", db.top_k}}.dump();
  out += '\n';
  for (const auto& t : db.transactions) {
    out += Json{{"source_id", t.source_id}, {"items", t.items}}.dump();
    out += '\n';
  }
  detail::write_text(path, out);
}

TransactionDatabase load_database(const std::filesystem::path& path) {
  detail::LineReader reader(path);
  if (!reader.next()) throw ParseError(path.string() + ": missing transaction database header");
  TransactionDatabase db;
  {
    const Json header = reader.parse();
    for (const char* key : {"feature_dim", "vocab_size", "top_k"}) {
      if (!header.is_object() || !header.contains(key) || !header[key].is_number_unsigned()) {
        reader.fail(std::string("header lacks unsigned \"") + key + "\"");
      }
    }
    db.feature_dim = header["feature_dim"].get<std::size_t>();
    db.vocab_size = header["vocab_size"].get<std::size_t>();
    db.top_k = header["top_k"].get<std::size_t>();
  }
  while (reader.next()) {
    const Json record = reader.parse();
    if (!record.is_object() || !record.contains("items") || !record["items"].is_array()) {
      reader.fail("record lacks an \"items\" array");
    }
    Transaction t;
    t.origin = Origin::cross_modal;
    if (record.contains("source_id") && record["source_id"].is_string()) {
      t.source_id = record["source_id"].get<std::string>();
    }
    for (const auto& item : record["items"]) {
      if (!item.is_number_unsigned()) reader.fail("item is not an unsigned integer");
      t.items.push_back(item.get<Item>());
    }
    db.transactions.push_back(std::move(t));
  }
  try {
    db.validate();
  } catch (const InvariantError& e) {
    throw InvariantError(path.string() + ": " + e.what());
  }
  return db;
}

}  // namespace xmr
