#include "xmr/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include "jsonl.hpp"
#include "xmr/error.hpp"
#include "xmr/parallel.hpp"
#include "xmr/random.hpp"

namespace xmr {

WordSet reference_labels(std::span<const Story> stories, TextMode mode, const Vocabulary* vocab) {
  std::vector<std::vector<std::string>> sentences;
  for (const auto& story : stories) {
    for (const auto& image : story.images) sentences.push_back(image.tokens);
  }
  WordSet labels = preprocess_tokens(sentences, mode);
  if (vocab) std::erase_if(labels, [&](const std::string& w) { return !vocab->contains(w); });
  return labels;
}

std::vector<EvalStream> build_eval_streams(const AnnotationTable& annotations, const FeatureTable& features,
                                           std::size_t top_k, TextMode mode, const Vocabulary* label_vocab) {
  std::map<std::vector<std::string>, std::size_t> by_sequence;
  std::vector<std::vector<Story>> groups;
  for (const auto& story : annotations.stories) {
    std::vector<std::string> key;
    for (const auto& image : story.images) key.push_back(image.image_id);
    const auto [it, inserted] = by_sequence.try_emplace(std::move(key), groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(story);
  }

  std::vector<EvalStream> streams;
  streams.reserve(groups.size());
  for (const auto& group : groups) {
    EvalStream s;
    s.story_id = group.front().story_id;
    for (const auto& image : group.front().images) {
      const auto row = features.find(image.image_id);
      if (!row) {
        throw JoinError("story '" + s.story_id + "' references image '" + image.image_id + "' with no features");
      }
      Transaction t = build_image_transaction(*row, top_k);
      t.source_id = image.image_id;
      s.images.push_back(std::move(t));
    }
    s.labels = reference_labels(group, mode, label_vocab);
    streams.push_back(std::move(s));
  }
  return streams;
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (count == 0 || count >= n) return all;
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) std::swap(all[i], all[rng.uniform(i, n - 1)]);
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

EvalReport evaluate(std::span<const ConceptSet> inferences, std::span<const LabeledStream> references) {
  if (inferences.empty()) throw AlignmentError("evaluation needs at least one stream");
  if (inferences.size() != references.size()) {
    throw AlignmentError("evaluation got " + std::to_string(inferences.size()) + " inferences and " +
                         std::to_string(references.size()) + " references");
  }

  double num = 0, hit = 0, zero = 0, precision = 0, recall = 0, f1 = 0;
  for (std::size_t i = 0; i < inferences.size(); ++i) {
    const auto& s = inferences[i];
    const auto& r = references[i];
    if (s.story_id != r.story_id) {
      throw AlignmentError("stream " + std::to_string(i) + ": inference '" + s.story_id + "' vs reference '" +
                           r.story_id + "'");
    }
    WordSet predicted = s.words();
    std::sort(predicted.begin(), predicted.end());
    predicted.erase(std::unique(predicted.begin(), predicted.end()), predicted.end());
    WordSet labels = r.labels;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    std::size_t hits = 0;
    for (const auto& w : predicted) hits += std::binary_search(labels.begin(), labels.end(), w) ? 1 : 0;

    const auto n = static_cast<double>(predicted.size());
    const auto m = static_cast<double>(labels.size());
    const auto h = static_cast<double>(hits);
    num += n;
    hit += h;
    if (predicted.empty()) zero += 1;
    if (n > 0) precision += h / n;
    if (m > 0) recall += h / m;
    // Harmonic mean of h/n and h/m.
    if (hits > 0) f1 += 2.0 * h / (n + m);
  }

  const auto count = static_cast<double>(inferences.size());
  EvalReport report;
  report.n_streams = inferences.size();
  report.num = num / count;
  report.hit = hit / count;
  report.zero = zero / count;
  report.precision = precision / count;
  report.recall = recall / count;
  report.f1 = f1 / count;
  const double pr = report.precision + report.recall;
  report.f1_pooled = pr > 0 ? 2.0 * report.precision * report.recall / pr : 0.0;
  return report;
}

std::vector<SweepRow> threshold_sweep(const TransactionDatabase& db, std::span<const SweepPoint> grid,
                                      std::span<const EvalStream> sample, const SweepOptions& options) {
  if (grid.empty()) throw DomainError("threshold sweep needs a non-empty grid");
  if (!db.vocab) throw DomainError("threshold sweep needs the database vocabulary");

  std::vector<Thresholds> points;
  for (const auto& p : grid) {
    Thresholds t{p.supp_min, p.conf_min, options.strict};
    t.validate();
    points.push_back(t);
  }
  Count loosest = points.front().effective_supp_min();
  for (const auto& t : points) loosest = std::min(loosest, t.effective_supp_min());

  // Frequent(s2) is a subset of Frequent(s1) for s2 >= s1 with equal counts,
  // so one mining pass at the loosest support serves every grid point.
  MineOptions mine;
  mine.supp_min = loosest;
  mine.max_len = options.max_len;
  mine.cap = ModalityCap{static_cast<Item>(db.feature_dim), 1};
  mine.threads = options.threads;
  const FrequentItemsetTable frequent = mine_frequent(db.transactions, mine);

  std::vector<LabeledStream> references;
  references.reserve(sample.size());
  for (const auto& s : sample) references.push_back({s.story_id, s.labels});

  std::vector<SweepRow> rows;
  for (const auto& t : points) {
    RuleGenOptions gen;
    gen.thresholds = t;
    gen.threads = options.threads;
    const RuleStore store = generate_rules(frequent, db.feature_dim, *db.vocab, gen);
    const RuleIndex index(store);

    std::vector<ConceptSet> inferences(sample.size());
    parallel_for(sample.size(), options.threads, [&](unsigned, std::size_t i) {
      inferences[i] = index.infer_stream(sample[i].story_id, sample[i].images);
    });

    SweepRow row;
    row.thresholds = t;
    row.rule_count = store.size();
    row.report = evaluate(inferences, references);
    row.report.thresholds = t;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> comprehensive_score(std::span<const std::vector<double>> runs, std::span<const double> lower,
                                        std::span<const double> upper) {
  if (lower.size() != upper.size()) throw DimensionError("lower and upper bounds differ in length");
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (!(upper[j] > lower[j])) {
      throw BoundsError("metric " + std::to_string(j) + ": upper bound must exceed lower bound");
    }
  }
  std::vector<double> scores;
  scores.reserve(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].size() != lower.size()) {
      throw DimensionError("run " + std::to_string(i) + " has " + std::to_string(runs[i].size()) + " metrics, expected " +
                           std::to_string(lower.size()));
    }
    double score = 0;
    for (std::size_t j = 0; j < lower.size(); ++j) {
      score += std::clamp((runs[i][j] - lower[j]) / (upper[j] - lower[j]), 0.0, 1.0);
    }
    scores.push_back(score);
  }
  return scores;
}

std::string report_json(std::span<const SweepRow> rows) {
  detail::Json doc = detail::Json::array();
  for (const auto& row : rows) {
    const auto& r = row.report;
    detail::Json entry;
    entry["supp_min"] = row.thresholds.supp_min;
    entry["conf_min"] = {row.thresholds.conf_min.num(), row.thresholds.conf_min.den()};
    entry["rule_count"] = row.rule_count;
    entry["num"] = r.num;
    entry["hit"] = r.hit;
    entry["zero"] = r.zero;
    entry["precision"] = r.precision;
    entry["recall"] = r.recall;
    entry["f1"] = r.f1;
    entry["f1_pooled"] = r.f1_pooled;
    doc.push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

void save_report(std::span<const SweepRow> rows, const std::filesystem::path& path) {
  detail::write_text(path, report_json(rows));
}

void render_table(std::ostream& os, std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << std::left << std::setw(6) << "Sup" << std::setw(8) << "Conf" << std::right << std::setw(8) << "Num"
      << std::setw(8) << "Hit" << std::setw(8) << "Zero" << std::setw(8) << "Prec" << std::setw(8) << "Recall"
      << std::setw(8) << "F1" << std::setw(10) << "Rules" << '\n';
  out << std::fixed;
  for (const auto& row : rows) {
    const auto& r = row.report;
    std::ostringstream conf;
    conf << std::fixed << std::setprecision(1) << row.thresholds.conf_min.to_double() * 100 << '%';
    out << std::left << std::setw(6) << row.thresholds.supp_min << std::setw(8) << conf.str() << std::right
        << std::setprecision(1) << std::setw(8) << r.num << std::setw(8) << r.hit << std::setw(7) << r.zero * 100 << '%'
        << std::setw(7) << r.precision * 100 << '%' << std::setw(7) << r.recall * 100 << '%' << std::setprecision(3)
        << std::setw(8) << r.f1 << std::setw(10) << row.rule_count << '\n';
  }
  os << out.str();
}

}  // namespace xmr
