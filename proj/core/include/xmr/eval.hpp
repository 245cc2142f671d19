#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "xmr/inference.hpp"
#include "xmr/ingest.hpp"
#include "xmr/miner.hpp"
#include "xmr/rules.hpp"
#include "xmr/text_filter.hpp"
#include "xmr/transactions.hpp"

namespace xmr {

/// Rule-quality metrics averaged over photo streams.
struct EvalReport {
  double num = 0;        ///< mean inferred concepts per stream
  double hit = 0;        ///< mean inferred concepts found in the references
  double zero = 0;       ///< fraction of streams with no inference
  double precision = 0;
  double recall = 0;
  double f1 = 0;         ///< mean of per-stream F1
  double f1_pooled = 0;  ///< harmonic mean of `precision` and `recall`
  std::size_t n_streams = 0;
  std::optional<Thresholds> thresholds;
};

/// Reference words of a story (or several stories sharing a stream):
/// normalized tokens of every sentence, deduplicated. With `vocab`,
/// words outside it are dropped.
WordSet reference_labels(std::span<const Story> stories, TextMode mode, const Vocabulary* vocab = nullptr);

struct LabeledStream {
  std::string story_id;
  WordSet labels;
};

/// Throws AlignmentError when the lists are empty, differ in length, or
/// disagree on story_id at any position.
EvalReport evaluate(std::span<const ConceptSet> inferences, std::span<const LabeledStream> references);

/// A photo stream ready for evaluation: five image transactions and the
/// reference words.
struct EvalStream {
  std::string story_id;
  std::vector<Transaction> images;
  WordSet labels;
};

/// One stream per distinct five-image sequence, named after the first story
/// showing it; stories sharing a sequence pool their reference words.
/// Throws JoinError when an image has no features.
std::vector<EvalStream> build_eval_streams(const AnnotationTable& annotations, const FeatureTable& features,
                                           std::size_t top_k, TextMode mode, const Vocabulary* label_vocab = nullptr);

/// `count` distinct indices from [0, n) drawn without replacement, returned
/// ascending. All of them when count is 0 or >= n.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::uint64_t seed);

struct SweepPoint {
  Count supp_min = 3;
  Rational conf_min{3, 5};
};

struct SweepRow {
  Thresholds thresholds;
  std::size_t rule_count = 0;
  EvalReport report;
};

struct SweepOptions {
  std::optional<std::size_t> max_len;
  bool strict = false;
  unsigned threads = 1;
};

/// Mines once at the loosest support in the grid, then generates rules,
/// infers and evaluates per point. Rows follow grid order. Throws
/// DomainError on an empty grid.
std::vector<SweepRow> threshold_sweep(const TransactionDatabase& db, std::span<const SweepPoint> grid,
                                      std::span<const EvalStream> sample, const SweepOptions& options = {});

/// Sum over metrics of (x - l) / (r - l), each term clamped to [0, 1].
/// `runs[i][j]` is metric j of run i. Throws BoundsError unless r > l for
/// every metric, DimensionError on ragged input.
std::vector<double> comprehensive_score(std::span<const std::vector<double>> runs,
                                        std::span<const double> lower, std::span<const double> upper);

/// JSON array of sweep rows.
void save_report(std::span<const SweepRow> rows, const std::filesystem::path& path);
std::string report_json(std::span<const SweepRow> rows);
/// Fixed-width table with columns Sup, Conf, Rules, Num, Hit, Zero, Prec, Recall, F1.
void render_table(std::ostream& os, std::span<const SweepRow> rows);

}  // namespace xmr
