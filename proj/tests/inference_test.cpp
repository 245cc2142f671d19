#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "support.hpp"
#include "xmr/error.hpp"
#include "xmr/inference.hpp"
#include "xmr/random.hpp"
#include "xmr/synthetic.hpp"

namespace xmr {
namespace {

// D = 8; words wa, wb, wc, wd, we, wf at items 8..13.
const Vocabulary kVocab({"wa", "wb", "wc", "wd", "we", "wf"});
const StoreContext kContext = StoreContext::from(8, kVocab);

RuleEntry rule(Itemset ante, std::string_view word, Count joint = 1, Count ante_count = 1) {
  const Item consequent = 8 + kVocab.lookup(word);
  return RuleEntry{{std::move(ante), consequent, joint, ante_count}, std::string(word), {{"t", joint, ante_count}}};
}

Transaction image(Itemset items) { return Transaction{std::move(items), Origin::image, {}}; }

std::vector<std::string> words_of(const ImageConcepts& concepts) {
  std::vector<std::string> out;
  for (const auto& c : concepts) out.push_back(c.word);
  return out;
}

std::set<std::string> word_set(const ImageConcepts& concepts) {
  const auto w = words_of(concepts);
  return {w.begin(), w.end()};
}

TEST(InferImage, FiresRulesWhoseAntecedentIsContained) {
  const RuleStore store(kContext, {rule({1}, "wa"), rule({2}, "wb"), rule({1, 5}, "wc")});
  EXPECT_EQ(words_of(infer_image(image({1, 5}), store)), (std::vector<std::string>{"wa", "wc"}));
}

TEST(InferImage, EmptyStore) { EXPECT_TRUE(infer_image(image({1, 2}), RuleStore(kContext)).empty()); }

TEST(InferImage, SaturatedImageFiresEverything) {
  const RuleStore store(kContext, {rule({1}, "wa"), rule({2, 3}, "wb"), rule({0, 7}, "wc"), rule({4}, "wa")});
  const auto got = infer_image(image({0, 1, 2, 3, 4, 5, 6, 7}), store);
  EXPECT_EQ(words_of(got), (std::vector<std::string>{"wa", "wb", "wc"}));
  EXPECT_EQ(got.front().rules.size(), 2u);
}

TEST(InferImage, RejectsNonImageInput) {
  const RuleStore store(kContext, {rule({1}, "wa")});
  EXPECT_THROW(infer_image(Transaction{{1}, Origin::cross_modal, {}}, store), OriginError);
  EXPECT_THROW(infer_image(image({1, 9}), store), OriginError);
}

std::vector<Transaction> stream(std::vector<Itemset> parts) {
  std::vector<Transaction> out;
  for (auto& p : parts) out.push_back(image(std::move(p)));
  return out;
}

TEST(InferStream, UnionWithoutDuplicates) {
  const RuleStore store(kContext, {rule({1}, "wa"), rule({2}, "wa"), rule({2}, "wb")});
  const ConceptSet set = infer_stream("s", stream({{1}, {2}, {}, {}, {}}), store);
  EXPECT_EQ(set.words(), (std::vector<std::string>{"wa", "wb"}));
  EXPECT_EQ(set.concepts.front().rules.size(), 2u);
  EXPECT_EQ(set.image_words[1], (std::vector<std::string>{"wa", "wb"}));
}

TEST(InferStream, AllEmpty) {
  const RuleStore store(kContext, {rule({1}, "wa")});
  const ConceptSet set = infer_stream("s", stream({{}, {}, {}, {}, {}}), store);
  EXPECT_TRUE(set.concepts.empty());
  EXPECT_EQ(set.image_words.size(), 5u);
}

TEST(InferStream, DisjointImagesAddUp) {
  const RuleStore store(kContext, {rule({0}, "wf"), rule({1}, "wb"), rule({1}, "wa"), rule({2}, "we"),
                                   rule({2}, "wd"), rule({2}, "wc")});
  const ConceptSet set = infer_stream("s", stream({{0}, {1}, {2}, {}, {}}), store);
  // First-inference order, lexicographic within one image.
  EXPECT_EQ(set.words(), (std::vector<std::string>{"wf", "wa", "wb", "wc", "wd", "we"}));
}

TEST(InferStream, WrongArity) {
  const RuleStore store(kContext);
  EXPECT_THROW(infer_stream("s", stream({{}, {}, {}, {}}), store), ArityError);
}

RuleStore random_store(SplitMix64& rng, std::size_t n) {
  std::vector<RuleEntry> entries;
  std::set<std::pair<Itemset, Item>> keys;
  while (entries.size() < n) {
    Itemset ante;
    for (Item i = 0; i < 8; ++i) {
      if (rng.uniform(0, 3) == 0) ante.push_back(i);
    }
    if (ante.empty()) continue;
    const std::string& word = kVocab.words()[rng.uniform(0, 5)];
    if (!keys.insert({ante, 8 + kVocab.lookup(word)}).second) continue;
    const Count a = static_cast<Count>(rng.uniform(1, 9));
    entries.push_back(rule(ante, word, static_cast<Count>(rng.uniform(1, a)), a));
  }
  return RuleStore(kContext, std::move(entries));
}

Itemset random_image(SplitMix64& rng) {
  Itemset items;
  for (Item i = 0; i < 8; ++i) {
    if (rng.uniform(0, 1)) items.push_back(i);
  }
  return items;
}

TEST(InferImage, PropertyMatchesExhaustiveCheck) {
  SplitMix64 rng(1);
  for (int round = 0; round < 200; ++round) {
    const RuleStore store = random_store(rng, rng.uniform(0, 20));
    const Itemset items = random_image(rng);
    std::set<std::string> expected;
    for (const auto& e : store) {
      if (std::includes(items.begin(), items.end(), e.rule.antecedent.begin(), e.rule.antecedent.end())) {
        expected.insert(e.word);
      }
    }
    const auto got = infer_image(image(items), store);
    EXPECT_EQ(word_set(got), expected);
    EXPECT_EQ(got.size(), expected.size());
  }
}

TEST(InferImage, PropertyMonotoneInRulesAndItems) {
  SplitMix64 rng(2);
  for (int round = 0; round < 200; ++round) {
    const RuleStore big = random_store(rng, 15);
    std::vector<RuleEntry> subset;
    for (const auto& e : big) {
      if (rng.uniform(0, 1)) subset.push_back(e);
    }
    const RuleStore small(kContext, subset);
    Itemset t = random_image(rng);
    Itemset t_plus = t;
    for (Item i = 0; i < 8; ++i) {
      if (rng.uniform(0, 2) == 0) t_plus.push_back(i);
    }
    std::sort(t_plus.begin(), t_plus.end());
    t_plus.erase(std::unique(t_plus.begin(), t_plus.end()), t_plus.end());

    const auto small_words = word_set(infer_image(image(t), small));
    const auto big_words = word_set(infer_image(image(t), big));
    EXPECT_TRUE(std::includes(big_words.begin(), big_words.end(), small_words.begin(), small_words.end()));
    const auto plus_words = word_set(infer_image(image(t_plus), big));
    EXPECT_TRUE(std::includes(plus_words.begin(), plus_words.end(), big_words.begin(), big_words.end()));
  }
}

TEST(InferImage, PropertyMergeConsistency) {
  SplitMix64 rng(3);
  for (int round = 0; round < 200; ++round) {
    const RuleStore a = random_store(rng, rng.uniform(0, 12));
    const RuleStore b = random_store(rng, rng.uniform(0, 12));
    const RuleStore m = merge_stores(a, b);
    const Itemset t = random_image(rng);
    std::set<std::string> expected = word_set(infer_image(image(t), a));
    const auto from_b = word_set(infer_image(image(t), b));
    expected.insert(from_b.begin(), from_b.end());
    EXPECT_EQ(word_set(infer_image(image(t), m)), expected);
  }
}

TEST(InferStream, Idempotent) {
  SplitMix64 rng(4);
  const RuleStore store = random_store(rng, 20);
  const RuleIndex index(store);
  std::vector<Transaction> images;
  for (int i = 0; i < 5; ++i) images.push_back(image(random_image(rng)));
  EXPECT_EQ(index.infer_stream("s", images), index.infer_stream("s", images));
}

TEST(ConceptLine, Layout) {
  const RuleStore store(kContext, {rule({1}, "wa", 3, 4)});
  const ConceptSet set = infer_stream("s1", stream({{1}, {}, {}, {}, {}}), store);
  std::ostringstream plain, full;
  write_concept_line(plain, set, false, false);
  write_concept_line(full, set, true, true);
  EXPECT_EQ(plain.str(), "{\"story_id\":\"s1\",\"concepts\":[\"wa\"]}\n");
  EXPECT_EQ(full.str(),
            "{\"story_id\":\"s1\",\"concepts\":[\"wa\"],\"provenance\":{\"wa\":[{\"antecedent\":[1],"
            "\"confidence\":[3,4]}]},\"images\":[[\"wa\"],[],[],[],[]]}\n");
}

}  // namespace
}  // namespace xmr
