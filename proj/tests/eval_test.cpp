#include <gtest/gtest.h>

#include <numeric>
#include <set>
#include <sstream>

#include "support.hpp"
#include "xmr/error.hpp"
#include "xmr/eval.hpp"
#include "xmr/inference.hpp"
#include "xmr/random.hpp"
#include "xmr/synthetic.hpp"

namespace xmr {
namespace {

ConceptSet inferred(std::string id, std::vector<std::string> words) {
  ConceptSet s;
  s.story_id = std::move(id);
  for (auto& w : words) s.concepts.push_back({std::move(w), {}});
  return s;
}

TEST(Evaluate, HandBuiltFixture) {
  const std::vector<ConceptSet> s{inferred("a", {"dog", "run", "park"})};
  const std::vector<LabeledStream> r{{"a", {"dog", "park", "ball", "play"}}};
  const EvalReport rep = evaluate(s, r);
  EXPECT_NEAR(rep.num, 3.0, 1e-12);
  EXPECT_NEAR(rep.hit, 2.0, 1e-12);
  EXPECT_NEAR(rep.zero, 0.0, 1e-12);
  EXPECT_NEAR(rep.precision, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(rep.recall, 0.5, 1e-12);
  EXPECT_NEAR(rep.f1, 4.0 / 7.0, 1e-12);
  EXPECT_NEAR(rep.f1_pooled, 4.0 / 7.0, 1e-12);
  EXPECT_EQ(rep.n_streams, 1u);
}

TEST(Evaluate, PerfectStream) {
  const std::vector<ConceptSet> s{inferred("a", {"x", "y"})};
  const std::vector<LabeledStream> r{{"a", {"y", "x"}}};
  const EvalReport rep = evaluate(s, r);
  EXPECT_EQ(rep.precision, 1.0);
  EXPECT_EQ(rep.recall, 1.0);
  EXPECT_EQ(rep.f1, 1.0);
}

TEST(Evaluate, EmptyInference) {
  const std::vector<ConceptSet> s{inferred("a", {})};
  const std::vector<LabeledStream> r{{"a", {"y"}}};
  const EvalReport rep = evaluate(s, r);
  EXPECT_EQ(rep.num, 0.0);
  EXPECT_EQ(rep.zero, 1.0);
  EXPECT_EQ(rep.precision, 0.0);
  EXPECT_EQ(rep.recall, 0.0);
  EXPECT_EQ(rep.f1, 0.0);
}

TEST(Evaluate, MacroAndPooledF1Differ) {
  const std::vector<ConceptSet> s{inferred("a", {"x"}), inferred("b", {"p", "q", "r", "s"})};
  const std::vector<LabeledStream> r{{"a", {"x"}}, {"b", {"p", "z", "y", "w"}}};
  const EvalReport rep = evaluate(s, r);
  EXPECT_NEAR(rep.f1, (1.0 + 0.25) / 2.0, 1e-12);
  EXPECT_NEAR(rep.precision, 0.625, 1e-12);
  EXPECT_NEAR(rep.recall, 0.625, 1e-12);
  EXPECT_NEAR(rep.f1_pooled, 0.625, 1e-12);
}

TEST(Evaluate, AlignmentErrors) {
  const std::vector<ConceptSet> s{inferred("a", {})};
  const std::vector<LabeledStream> wrong_id{{"b", {}}};
  const std::vector<LabeledStream> two{{"a", {}}, {"b", {}}};
  const std::vector<ConceptSet> none;
  const std::vector<LabeledStream> no_refs;
  EXPECT_THROW(evaluate(s, wrong_id), AlignmentError);
  EXPECT_THROW(evaluate(s, two), AlignmentError);
  EXPECT_THROW(evaluate(none, no_refs), AlignmentError);
}

TEST(Evaluate, PropertyBoundsAndPermutationInvariance) {
  SplitMix64 rng(9);
  const std::vector<std::string> pool{"a", "b", "c", "d", "e", "f", "g"};
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = rng.uniform(1, 12);
    std::vector<ConceptSet> s;
    std::vector<LabeledStream> r;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> predicted, labels;
      for (const auto& w : pool) {
        if (rng.uniform(0, 2) == 0) predicted.push_back(w);
        if (rng.uniform(0, 2) == 0) labels.push_back(w);
      }
      s.push_back(inferred(std::to_string(i), predicted));
      r.push_back({std::to_string(i), labels});
    }
    const EvalReport base = evaluate(s, r);
    EXPECT_LE(base.hit, base.num);
    for (const double v : {base.zero, base.precision, base.recall, base.f1, base.f1_pooled}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    const bool all_empty = std::all_of(s.begin(), s.end(), [](const ConceptSet& c) { return c.concepts.empty(); });
    EXPECT_EQ(base.zero == 1.0, all_empty);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::vector<ConceptSet> s2;
    std::vector<LabeledStream> r2;
    for (const auto i : order) {
      s2.push_back(s[i]);
      r2.push_back(r[i]);
    }
    const EvalReport shuffled = evaluate(s2, r2);
    EXPECT_NEAR(shuffled.num, base.num, 1e-12);
    EXPECT_NEAR(shuffled.hit, base.hit, 1e-12);
    EXPECT_NEAR(shuffled.precision, base.precision, 1e-12);
    EXPECT_NEAR(shuffled.recall, base.recall, 1e-12);
    EXPECT_NEAR(shuffled.f1, base.f1, 1e-12);
  }
}

Story make_story(std::string id, std::vector<std::vector<std::string>> sentences, std::string prefix = "i") {
  Story s;
  s.story_id = std::move(id);
  for (std::size_t i = 0; i < 5; ++i) s.images[i] = {prefix + std::to_string(i), sentences[i % sentences.size()]};
  return s;
}

TEST(ReferenceLabels, PreprocessedUnion) {
  const std::vector<Story> one{make_story("s", {{"the", "dog", "ran"}})};
  EXPECT_EQ(reference_labels(one, TextMode::heuristic), (WordSet{"dog", "run"}));
  EXPECT_TRUE(reference_labels(std::vector<Story>{}, TextMode::heuristic).empty());
  const std::vector<Story> two{make_story("s", {{"dog", "park"}}), make_story("t", {{"park", "ball"}})};
  EXPECT_EQ(reference_labels(two, TextMode::passthrough), (WordSet{"ball", "dog", "park"}));
  const Vocabulary vocab({"dog"});
  EXPECT_EQ(reference_labels(two, TextMode::passthrough, &vocab), (WordSet{"dog"}));
}

TEST(EvalStreams, IdenticalSequencesShareOneStream) {
  FeatureTable features(3);
  for (int i = 0; i < 5; ++i) {
    const std::vector<float> v{1, 0, static_cast<float>(i)};
    features.add("i" + std::to_string(i), v);
    features.add("j" + std::to_string(i), v);
  }
  AnnotationTable notes;
  notes.stories = {make_story("s1", {{"dog"}}), make_story("s2", {{"cat"}}), make_story("s3", {{"owl"}}, "j")};
  const auto streams = build_eval_streams(notes, features, 2, TextMode::passthrough);
  ASSERT_EQ(streams.size(), 2u);
  EXPECT_EQ(streams[0].story_id, "s1");
  EXPECT_EQ(streams[0].labels, (WordSet{"cat", "dog"}));
  EXPECT_EQ(streams[0].images.size(), 5u);
  EXPECT_EQ(streams[0].images[0].origin, Origin::image);
  EXPECT_EQ(streams[1].labels, (WordSet{"owl"}));
}

TEST(SampleIndices, DistinctSortedAndReproducible) {
  const auto a = sample_indices(100, 10, 42);
  EXPECT_EQ(a, sample_indices(100, 10, 42));
  EXPECT_NE(a, sample_indices(100, 10, 43));
  EXPECT_EQ(a.size(), 10u);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(std::set<std::size_t>(a.begin(), a.end()).size(), 10u);
  EXPECT_EQ(sample_indices(5, 0, 1).size(), 5u);
  EXPECT_EQ(sample_indices(5, 9, 1).size(), 5u);
}

TEST(ComprehensiveScore, NormalizedSum) {
  const std::vector<double> lo{0, 10}, hi{1, 20};
  const std::vector<std::vector<double>> runs{{0, 10}, {1, 20}, {0.5, 15}, {2, 5}};
  const auto scores = comprehensive_score(runs, lo, hi);
  EXPECT_DOUBLE_EQ(scores[0], 0.0);
  EXPECT_DOUBLE_EQ(scores[1], 2.0);
  EXPECT_DOUBLE_EQ(scores[2], 1.0);
  EXPECT_DOUBLE_EQ(scores[3], 1.0);
  const std::vector<double> bad_hi{0, 20};
  EXPECT_THROW(comprehensive_score(runs, lo, bad_hi), BoundsError);
  const std::vector<std::vector<double>> ragged{{1}};
  EXPECT_THROW(comprehensive_score(ragged, lo, hi), DimensionError);
}

TEST(Report, JsonSchemaAndTable) {
  SweepRow row;
  row.thresholds = {3, Rational(3, 5), false};
  row.rule_count = 7;
  row.report.num = 3;
  row.report.precision = 0.5;
  const std::vector<SweepRow> rows{row};
  const std::string json = report_json(rows);
  const std::vector<std::string> keys{"supp_min", "conf_min",  "rule_count", "num", "hit",
                                      "zero",     "precision", "recall",     "f1",  "f1_pooled"};
  std::size_t at = 0;
  for (const auto& k : keys) {
    const auto pos = json.find("\"" + k + "\"", at);
    ASSERT_NE(pos, std::string::npos) << k;
    at = pos;
  }
  EXPECT_NE(json.find("\"conf_min\": [\n      3,\n      5\n    ]"), std::string::npos) << json;

  std::ostringstream table;
  render_table(table, rows);
  EXPECT_EQ(table.str().substr(0, table.str().find('\n')).find("Sup"), 0u);
  EXPECT_NE(table.str().find("60.0%"), std::string::npos);
}

// Rules at supp >= 2 are exactly {p} => w for the planted pairs that pass,
// so a stream infers w iff one of its images holds p.
TEST(Sweep, PlantedCorpusMatchesClosedForm) {
  synthetic::GeneratorConfig config;
  config.transactions = 300;
  config.rules = 12;
  config.feature_dim = 1024;
  config.seed = 5;
  const auto corpus = synthetic::generate(config);
  const auto streams = corpus.streams();
  const std::vector<SweepPoint> grid{{2, Rational(1, 2)}, {3, Rational(3, 5)}, {2, Rational(4, 5)}};
  const auto rows = threshold_sweep(corpus.db, grid, streams);
  ASSERT_EQ(rows.size(), grid.size());

  for (std::size_t g = 0; g < grid.size(); ++g) {
    const Thresholds t{grid[g].supp_min, grid[g].conf_min, false};
    const auto expected_rules = corpus.expected_rules(t);
    EXPECT_EQ(rows[g].rule_count, expected_rules.size());
    std::size_t num = 0, hit = 0, zero = 0;
    for (const auto& s : streams) {
      std::set<std::string> fired;
      for (const auto& p : expected_rules) {
        for (const auto& image : s.images) {
          if (std::binary_search(image.items.begin(), image.items.end(), p.visual)) {
            fired.insert(corpus.vocab->word(p.word - static_cast<Item>(config.feature_dim)));
          }
        }
      }
      num += fired.size();
      zero += fired.empty() ? 1 : 0;
      for (const auto& w : fired) hit += std::binary_search(s.labels.begin(), s.labels.end(), w) ? 1 : 0;
    }
    const double n = static_cast<double>(streams.size());
    EXPECT_DOUBLE_EQ(rows[g].report.num, static_cast<double>(num) / n);
    EXPECT_DOUBLE_EQ(rows[g].report.hit, static_cast<double>(hit) / n);
    EXPECT_DOUBLE_EQ(rows[g].report.zero, static_cast<double>(zero) / n);
  }
  EXPECT_GE(rows[0].rule_count, rows[1].rule_count);
}

TEST(Sweep, SinglePointEqualsOneRun) {
  synthetic::GeneratorConfig config;
  config.transactions = 200;
  config.rules = 8;
  config.feature_dim = 512;
  const auto corpus = synthetic::generate(config);
  const auto streams = corpus.streams();
  const std::vector<SweepPoint> grid{{2, Rational(1, 2)}};
  const auto row = threshold_sweep(corpus.db, grid, streams).front();

  MineOptions mine;
  mine.supp_min = 2;
  RuleGenOptions gen;
  gen.thresholds = {2, Rational(1, 2), false};
  const RuleStore store = generate_rules(mine_frequent(corpus.db.transactions, mine), 512, *corpus.vocab, gen);
  std::vector<ConceptSet> inferences;
  std::vector<LabeledStream> refs;
  for (const auto& s : streams) {
    inferences.push_back(infer_stream(s.story_id, s.images, store));
    refs.push_back({s.story_id, s.labels});
  }
  const EvalReport direct = evaluate(inferences, refs);
  EXPECT_EQ(row.rule_count, store.size());
  EXPECT_EQ(row.report.num, direct.num);
  EXPECT_EQ(row.report.f1, direct.f1);
  EXPECT_EQ(report_json(std::vector<SweepRow>{row}),
            report_json(std::vector<SweepRow>{threshold_sweep(corpus.db, grid, streams).front()}));
}

TEST(Sweep, EmptyGridRejected) {
  synthetic::GeneratorConfig config;
  config.transactions = 100;
  config.rules = 4;
  config.feature_dim = 512;
  const auto corpus = synthetic::generate(config);
  EXPECT_THROW(threshold_sweep(corpus.db, {}, corpus.streams()), DomainError);
}

}  // namespace
}  // namespace xmr
