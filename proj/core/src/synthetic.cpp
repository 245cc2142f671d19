#include "xmr/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "xmr/error.hpp"
#include "xmr/random.hpp"

namespace xmr::synthetic {

namespace {

// `count` distinct values from [lo, lo + range).
std::vector<Item> distinct(SplitMix64& rng, Item lo, std::size_t range, std::size_t count) {
  std::vector<Item> out;
  while (out.size() < count) {
    const auto item = static_cast<Item>(lo + rng.uniform(0, range - 1));
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  }
  return out;
}

std::string numbered(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%04zu", prefix, i);
  return buf;
}

}  // namespace

bool PlantedRule::passes(const Thresholds& t) const {
  return t.passes_support(joint) && t.passes_confidence(Rational(joint, ante));
}

std::vector<PlantedRule> PlantedCorpus::expected_rules(const Thresholds& t) const {
  std::vector<PlantedRule> out;
  for (const auto& p : planted) {
    if (p.passes(t)) out.push_back(p);
  }
  return out;
}

std::vector<EvalStream> PlantedCorpus::streams() const {
  std::vector<EvalStream> out;
  const std::size_t d = db.feature_dim;
  for (std::size_t start = 0; start + kStreamLength <= db.size(); start += kStreamLength) {
    EvalStream s;
    s.story_id = numbered("story", start / kStreamLength);
    for (std::size_t i = start; i < start + kStreamLength; ++i) {
      const auto& t = db.transactions[i];
      Transaction image{{}, Origin::image, t.source_id};
      for (const Item item : t.items) {
        if (item < d) {
          image.items.push_back(item);
        } else {
          s.labels.push_back(vocab->word(static_cast<std::uint32_t>(item - d)));
        }
      }
      s.images.push_back(std::move(image));
    }
    std::sort(s.labels.begin(), s.labels.end());
    s.labels.erase(std::unique(s.labels.begin(), s.labels.end()), s.labels.end());
    out.push_back(std::move(s));
  }
  return out;
}

PlantedCorpus generate(const GeneratorConfig& config) {
  if (config.top_k < 1 || config.min_ante < 1 || config.min_ante > config.max_ante) {
    throw DomainError("invalid generator configuration");
  }
  if (config.rules * config.max_ante > config.transactions) {
    throw DomainError("not enough transactions to host the planted rules");
  }
  if (config.filler_pool < config.top_k) throw DomainError("filler pool smaller than top_k");
  const std::size_t worst_unique = config.rules * config.max_ante * (config.top_k - 1);
  if (config.rules + config.filler_pool + worst_unique > config.feature_dim) {
    throw DomainError("feature_dim too small for unique filler items");
  }

  SplitMix64 rng(config.seed);
  PlantedCorpus corpus;
  corpus.config = config;

  std::vector<std::string> words;
  for (std::size_t r = 0; r < config.rules; ++r) {
    PlantedRule p;
    p.visual = static_cast<Item>(r);
    p.word = static_cast<Item>(config.feature_dim + r);
    p.ante = static_cast<Count>(rng.uniform(config.min_ante, config.max_ante));
    p.joint = static_cast<Count>(rng.uniform(1, p.ante));
    corpus.planted.push_back(p);
    words.push_back(numbered("word", r));
  }
  corpus.vocab = std::make_shared<const Vocabulary>(std::move(words));

  std::vector<std::size_t> slots(config.transactions);
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  rng.shuffle(slots);

  const auto pool_lo = static_cast<Item>(config.rules);
  Item next_unique = static_cast<Item>(config.rules + config.filler_pool);
  std::vector<Transaction> txs(config.transactions);
  std::vector<bool> assigned(config.transactions, false);
  std::size_t cursor = 0;
  for (const auto& p : corpus.planted) {
    for (Count j = 0; j < p.ante; ++j) {
      const std::size_t slot = slots[cursor++];
      auto& items = txs[slot].items;
      items.push_back(p.visual);
      if (j < p.joint) {
        for (std::size_t f = 1; f < config.top_k; ++f) items.push_back(next_unique++);
        items.push_back(p.word);
      } else {
        const auto fillers = distinct(rng, pool_lo, config.filler_pool, config.top_k - 1);
        items.insert(items.end(), fillers.begin(), fillers.end());
      }
      assigned[slot] = true;
    }
  }
  for (std::size_t t = 0; t < config.transactions; ++t) {
    if (!assigned[t]) txs[t].items = distinct(rng, pool_lo, config.filler_pool, config.top_k);
    std::sort(txs[t].items.begin(), txs[t].items.end());
    txs[t].origin = Origin::cross_modal;
    txs[t].source_id = numbered("img", t);
  }

  corpus.db.transactions = std::move(txs);
  corpus.db.feature_dim = config.feature_dim;
  corpus.db.vocab_size = corpus.vocab->size();
  corpus.db.top_k = config.top_k;
  corpus.db.vocab = corpus.vocab;
  return corpus;
}

void write_files(const PlantedCorpus& corpus, const std::filesystem::path& features,
                 const std::filesystem::path& annotations) {
  const std::size_t d = corpus.db.feature_dim;
  FeatureTable table(d);
  AnnotationTable notes;
  std::vector<float> activation(d);
  for (std::size_t i = 0; i < corpus.db.size(); ++i) {
    const auto& t = corpus.db.transactions[i];
    std::fill(activation.begin(), activation.end(), 0.0f);
    std::vector<std::string> tokens;
    for (const Item item : t.items) {
      if (item < d) {
        activation[item] = 1.0f;
      } else {
        tokens.push_back(corpus.vocab->word(static_cast<std::uint32_t>(item - d)));
      }
    }
    tokens.push_back(numbered("noise", i));
    table.add(t.source_id, activation);

    const std::size_t slot = i % kStreamLength;
    if (slot == 0) {
      if (i + kStreamLength > corpus.db.size()) break;
      notes.stories.push_back({numbered("story", i / kStreamLength), {}});
    }
    notes.stories.back().images[slot] = {t.source_id, std::move(tokens)};
  }
  save_features(table, features);
  save_annotations(notes, annotations);
}

std::vector<Transaction> random_database(std::uint64_t seed, std::size_t max_transactions, std::size_t n_items,
                                         std::size_t max_width) {
  SplitMix64 rng(seed);
  const std::size_t m = rng.uniform(0, max_transactions);
  std::vector<Transaction> db(m);
  for (auto& t : db) {
    const std::size_t width = rng.uniform(0, std::min(max_width, n_items));
    t.items = distinct(rng, 0, n_items, width);
    std::sort(t.items.begin(), t.items.end());
  }
  return db;
}

}  // namespace xmr::synthetic
