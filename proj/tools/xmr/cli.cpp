#include "xmr/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include "xmr/error.hpp"
#include "xmr/inference.hpp"
#include "xmr/ingest.hpp"
#include "xmr/miner.hpp"
#include "xmr/parallel.hpp"
#include "xmr/rules.hpp"
#include "xmr/transactions.hpp"

namespace xmr::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

void require_file(const fs::path& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string("missing required ") + flag);
  if (!fs::is_regular_file(path)) throw IoError(std::string(flag) + ": no such file: " + path.string());
}

void require_output(const fs::path& path, const char* flag) {
  if (path.empty()) return;
  const fs::path parent = path.parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw IoError(std::string(flag) + ": directory does not exist: " + parent.string());
  }
  if (fs::is_directory(path)) throw IoError(std::string(flag) + ": is a directory: " + path.string());
}

bool mining_from_transactions(const RunConfig& c) { return !c.transactions.empty(); }

void validate_mining_inputs(const RunConfig& c) {
  if (mining_from_transactions(c)) {
    if (!c.features.empty() || !c.annotations.empty()) {
      throw UsageError("give either --transactions with --vocab, or --features with --annotations");
    }
    require_file(c.transactions, "--transactions");
    require_file(c.vocab, "--vocab");
  } else {
    require_file(c.features, "--features");
    require_file(c.annotations, "--annotations");
    if (!c.vocab.empty()) require_file(c.vocab, "--vocab");
  }
}

struct MiningInput {
  TransactionDatabase db;
  std::shared_ptr<const Vocabulary> vocab;
};

MiningInput load_mining_input(const RunConfig& c) {
  MiningInput in;
  if (mining_from_transactions(c)) {
    in.vocab = std::make_shared<const Vocabulary>(load_vocabulary(c.vocab));
    in.db = load_database(c.transactions);
    if (in.db.vocab_size != in.vocab->size()) {
      throw IncompatibleStoreError(c.transactions.string() + ": vocab_size " + std::to_string(in.db.vocab_size) +
                                   " does not match " + c.vocab.string() + " (" + std::to_string(in.vocab->size()) + ")");
    }
    in.db.vocab = in.vocab;
    return in;
  }
  const FeatureTable features = load_features(c.features, c.feature_dim);
  const AnnotationTable annotations = load_annotations(c.annotations);
  in.vocab = std::make_shared<const Vocabulary>(c.vocab.empty() ? build_vocabulary(annotations, c.min_count, c.text_mode)
                                                                : load_vocabulary(c.vocab));
  MiningParams params;
  params.top_k = c.top_k;
  params.thresholds = {c.supp_min, c.conf_min, c.strict};
  params.max_len = c.max_len;
  in.db = build_database(features, annotations, in.vocab, params, c.text_mode);
  return in;
}

std::string default_tag(const RunConfig& c) {
  const fs::path& source = mining_from_transactions(c) ? c.transactions : c.annotations;
  return source.stem().string();
}

Thresholds thresholds_of(const RunConfig& c) { return {c.supp_min, c.conf_min, c.strict}; }

int cmd_build_transactions(const RunConfig& c, std::ostream& out) {
  const FeatureTable features = load_features(c.features, c.feature_dim);
  const AnnotationTable annotations = load_annotations(c.annotations);
  auto vocab = std::make_shared<const Vocabulary>(c.vocab.empty() ? build_vocabulary(annotations, c.min_count, c.text_mode)
                                                                  : load_vocabulary(c.vocab));
  MiningParams params;
  params.top_k = c.top_k;
  params.thresholds = thresholds_of(c);
  const TransactionDatabase db = build_database(features, annotations, vocab, params, c.text_mode);

  save_database(db, c.out);
  if (!c.vocab_out.empty()) save_vocabulary(*vocab, c.vocab_out);
  out << "build-transactions: " << db.size() << " transactions, vocabulary " << vocab->size() << '\n';
  return kExitOk;
}

int cmd_mine(const RunConfig& c, std::ostream& out) {
  const MiningInput in = load_mining_input(c);
  const Thresholds thresholds = thresholds_of(c);

  MineOptions mine;
  mine.supp_min = thresholds.effective_supp_min();
  mine.max_len = c.max_len;
  mine.threads = c.threads;
  // Rules only need itemsets with at most one word item. The debug dump
  // asks for the complete table instead.
  if (c.dump_itemsets.empty()) mine.cap = ModalityCap{static_cast<Item>(in.db.feature_dim), 1};
  const FrequentItemsetTable frequent = mine_frequent(in.db.transactions, mine);

  RuleGenOptions gen;
  gen.thresholds = thresholds;
  gen.tag = c.tag.empty() ? default_tag(c) : c.tag;
  gen.threads = c.threads;
  const RuleStore store = generate_rules(frequent, in.db.feature_dim, *in.vocab, gen);

  save_store(store, c.out);
  if (!c.vocab_out.empty()) save_vocabulary(*in.vocab, c.vocab_out);
  if (!c.dump_itemsets.empty()) save_itemsets(frequent, c.dump_itemsets);
  out << "mine: " << store.size() << " rules, " << store.concept_count() << " concepts from " << in.db.size()
      << " transactions\n";
  return kExitOk;
}

int cmd_infer(const RunConfig& c, std::ostream& out) {
  const RuleStore store = load_store(c.rules);
  const FeatureTable features = load_features(c.features, store.feature_dim());
  const RuleIndex index(store);

  std::vector<ConceptSet> sets;
  if (!c.annotations.empty()) {
    const AnnotationTable annotations = load_annotations(c.annotations);
    std::vector<std::vector<Transaction>> streams;
    for (const auto& story : annotations.stories) {
      auto& images = streams.emplace_back();
      for (const auto& image : story.images) {
        const auto row = features.find(image.image_id);
        if (!row) throw JoinError("story '" + story.story_id + "' references image '" + image.image_id + "' with no features");
        images.push_back(build_image_transaction(*row, c.top_k));
        images.back().source_id = image.image_id;
      }
    }
    sets.resize(streams.size());
    parallel_for(streams.size(), c.threads, [&](unsigned, std::size_t i) {
      sets[i] = index.infer_stream(annotations.stories[i].story_id, streams[i]);
    });
  } else {
    // Without stories, each image is reported on its own line.
    sets.resize(features.size());
    parallel_for(features.size(), c.threads, [&](unsigned, std::size_t i) {
      Transaction image = build_image_transaction(features.row(i), c.top_k);
      image.source_id = features.id(i);
      ConceptSet& set = sets[i];
      set.story_id = features.id(i);
      set.concepts = index.infer_image(image);
      auto& words = set.image_words.emplace_back();
      for (const auto& concept_ : set.concepts) words.push_back(concept_.word);
    });
  }

  std::ostringstream lines;
  std::size_t empty = 0;
  for (const auto& set : sets) {
    write_concept_line(lines, set, c.provenance, c.per_image);
    if (set.concepts.empty()) ++empty;
  }
  std::ofstream file(c.out, std::ios::binary | std::ios::trunc);
  if (!(file << lines.str())) throw IoError("cannot write " + c.out.string());
  out << "infer: " << sets.size() << " lines, " << empty << " without concepts\n";
  return kExitOk;
}

std::vector<EvalStream> sampled_streams(const AnnotationTable& annotations, const FeatureTable& features,
                                        const RunConfig& c) {
  std::vector<EvalStream> all = build_eval_streams(annotations, features, c.top_k, c.text_mode);
  std::vector<EvalStream> picked;
  for (const std::size_t i : sample_indices(all.size(), c.sample, c.seed)) picked.push_back(std::move(all[i]));
  return picked;
}

int cmd_eval(const RunConfig& c, std::ostream& out) {
  const RuleStore store = load_store(c.rules);
  const FeatureTable features = load_features(c.features, store.feature_dim());
  const AnnotationTable annotations = load_annotations(c.annotations);
  const std::vector<EvalStream> streams = sampled_streams(annotations, features, c);
  if (streams.empty()) throw AlignmentError(c.annotations.string() + ": no photo streams to evaluate");

  const RuleIndex index(store);
  std::vector<ConceptSet> inferences(streams.size());
  std::vector<LabeledStream> references;
  for (const auto& s : streams) references.push_back({s.story_id, s.labels});
  parallel_for(streams.size(), c.threads, [&](unsigned, std::size_t i) {
    inferences[i] = index.infer_stream(streams[i].story_id, streams[i].images);
  });

  SweepRow row;
  row.thresholds = store.thresholds().value_or(thresholds_of(c));
  row.rule_count = store.size();
  row.report = evaluate(inferences, references);
  row.report.thresholds = row.thresholds;
  const std::vector<SweepRow> rows{row};

  if (!c.out.empty()) save_report(rows, c.out);
  if (c.table || c.out.empty()) render_table(out, rows);
  return kExitOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const MiningInput in = load_mining_input(c);
  const fs::path& eval_features = c.eval_features.empty() ? c.features : c.eval_features;
  const fs::path& eval_annotations = c.eval_annotations.empty() ? c.annotations : c.eval_annotations;
  const FeatureTable features = load_features(eval_features, in.db.feature_dim);
  const std::vector<EvalStream> streams = sampled_streams(load_annotations(eval_annotations), features, c);
  if (streams.empty()) throw AlignmentError(eval_annotations.string() + ": no photo streams to evaluate");

  SweepOptions options;
  options.max_len = c.max_len;
  options.strict = c.strict;
  options.threads = c.threads;
  const std::vector<SweepRow> rows = threshold_sweep(in.db, c.grid, streams, options);

  if (!c.out.empty()) save_report(rows, c.out);
  if (c.table || c.out.empty()) render_table(out, rows);
  return kExitOk;
}

int cmd_merge(const RunConfig& c, std::ostream& out) {
  std::vector<RuleStore> stores;
  for (const auto& path : c.inputs) stores.push_back(load_store(path));
  RuleStore merged = stores.front();
  for (std::size_t i = 1; i < stores.size(); ++i) merged = merge_stores(merged, stores[i]);
  save_store(merged, c.out);
  out << "merge: " << merged.size() << " rules from " << stores.size() << " stores\n";
  return kExitOk;
}

}  // namespace

void RunConfig::validate() const {
  if (top_k < 1) throw UsageError("--top-k must be at least 1");
  if (min_count < 1) throw UsageError("--min-count must be at least 1");
  if (feature_dim < 1) throw UsageError("--feature-dim must be at least 1");
  if (max_len && *max_len < 1) throw UsageError("--max-len must be at least 1");
  Thresholds{supp_min, conf_min, strict}.validate();

  if (command == "build-transactions") {
    require_file(features, "--features");
    require_file(annotations, "--annotations");
    if (!vocab.empty()) require_file(vocab, "--vocab");
  } else if (command == "mine") {
    validate_mining_inputs(*this);
  } else if (command == "infer") {
    require_file(rules, "--rules");
    require_file(features, "--features");
    if (!annotations.empty()) require_file(annotations, "--annotations");
  } else if (command == "eval") {
    require_file(rules, "--rules");
    require_file(features, "--features");
    require_file(annotations, "--annotations");
  } else if (command == "sweep") {
    validate_mining_inputs(*this);
    if (grid.empty()) throw UsageError("--grid is empty");
    for (const auto& p : grid) Thresholds{p.supp_min, p.conf_min, strict}.validate();
    require_file(eval_features.empty() ? features : eval_features, "--eval-features");
    require_file(eval_annotations.empty() ? annotations : eval_annotations, "--eval-annotations");
  } else if (command == "merge") {
    if (inputs.empty()) throw UsageError("merge needs at least one --in");
    for (const auto& path : inputs) require_file(path, "--in");
  } else {
    throw UsageError("unknown subcommand '" + command + "'");
  }

  const bool needs_out = command != "eval" && command != "sweep";
  if (needs_out && out.empty()) throw UsageError("missing required --out");
  require_output(out, "--out");
  require_output(vocab_out, "--vocab-out");
  require_output(dump_itemsets, "--dump-itemsets");
}

std::vector<SweepPoint> parse_grid(std::string_view text) {
  std::vector<SweepPoint> grid;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw ParseError("grid point '" + std::string(item) + "' is not supp:conf");
    SweepPoint p;
    const std::string supp(item.substr(0, colon));
    try {
      std::size_t used = 0;
      const unsigned long value = std::stoul(supp, &used);
      if (used != supp.size()) throw std::invalid_argument("trailing characters");
      p.supp_min = static_cast<Count>(value);
    } catch (const std::exception&) {
      throw ParseError("grid point '" + std::string(item) + "' has a malformed support");
    }
    p.conf_min = Rational::parse(item.substr(colon + 1));
    grid.push_back(p);
  }
  return grid;
}

unsigned resolve_thread_flag(std::optional<unsigned> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("XMR_THREADS"); env && *env) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      throw UsageError(std::string("XMR_THREADS is not a number: '") + env + "'");
    }
  }
  return 0;
}

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  std::string conf_text = "0.6";
  std::string mode_text = "passthrough";
  std::string grid_text = "10:0.6,5:0.6,3:0.6,3:0.7,3:0.8";
  int threads = -1;
  std::size_t max_len = 0;

  CLI::App app{"Cross-modal association rule mining"};
  app.name("xmr");
  app.require_subcommand(1, 1);

  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", threads, "Worker threads (default: XMR_THREADS, else all cores)")
        ->check(CLI::NonNegativeNumber);
  };
  auto add_text = [&](CLI::App* sub) {
    sub->add_option("--text-mode", mode_text, "Token preprocessing")
        ->check(CLI::IsMember({"passthrough", "heuristic"}));
    sub->add_option("--min-count", c.min_count, "Vocabulary frequency cutoff");
  };
  auto add_mining = [&](CLI::App* sub) {
    sub->add_option("--features", c.features, "Feature JSONL");
    sub->add_option("--annotations", c.annotations, "Annotation JSONL");
    sub->add_option("--transactions", c.transactions, "Transaction database JSONL (instead of features/annotations)");
    sub->add_option("--vocab", c.vocab, "Vocabulary JSON");
    sub->add_option("--vocab-out", c.vocab_out, "Write the vocabulary used");
    sub->add_option("--feature-dim", c.feature_dim, "Activation dimension D");
    sub->add_option("--top-k", c.top_k, "Activations kept per image");
    sub->add_option("--min-support", c.supp_min, "Support threshold (transaction count)");
    sub->add_option("--min-confidence", conf_text, "Confidence threshold: 0.6, 60% or 3/5");
    sub->add_option("--max-len", max_len, "Cap on itemset size");
    sub->add_flag("--strict-thresholds", c.strict, "Require support and confidence strictly above thresholds");
    add_text(sub);
    add_threads(sub);
  };

  auto* build = app.add_subcommand("build-transactions", "Build the cross-modal transaction database");
  build->add_option("--features", c.features, "Feature JSONL");
  build->add_option("--annotations", c.annotations, "Annotation JSONL");
  build->add_option("--vocab", c.vocab, "Existing vocabulary JSON");
  build->add_option("--vocab-out", c.vocab_out, "Write the vocabulary used");
  build->add_option("--feature-dim", c.feature_dim, "Activation dimension D");
  build->add_option("--top-k", c.top_k, "Activations kept per image");
  build->add_option("--out", c.out, "Transaction database JSONL");
  add_text(build);

  auto* mine = app.add_subcommand("mine", "Mine cross-modal rules");
  add_mining(mine);
  mine->add_option("--tag", c.tag, "Provenance tag (default: input file stem)");
  mine->add_option("--dump-itemsets", c.dump_itemsets, "Also write all frequent itemsets");
  mine->add_option("--out", c.out, "Rule file");

  auto* infer = app.add_subcommand("infer", "Infer concepts for images or photo streams");
  infer->add_option("--rules", c.rules, "Rule file");
  infer->add_option("--features", c.features, "Feature JSONL");
  infer->add_option("--annotations", c.annotations, "Group images into stories");
  infer->add_option("--top-k", c.top_k, "Activations kept per image");
  infer->add_flag("--provenance", c.provenance, "Include firing rules per concept");
  infer->add_flag("--per-image", c.per_image, "Include per-image concept lists");
  infer->add_option("--out", c.out, "Concept JSONL");
  add_threads(infer);

  auto* eval = app.add_subcommand("eval", "Score inferred concepts against annotations");
  eval->add_option("--rules", c.rules, "Rule file");
  eval->add_option("--features", c.features, "Feature JSONL");
  eval->add_option("--annotations", c.annotations, "Reference annotation JSONL");
  eval->add_option("--top-k", c.top_k, "Activations kept per image");
  eval->add_option("--min-support", c.supp_min, "Reported when the rule file has no thresholds");
  eval->add_option("--min-confidence", conf_text, "Reported when the rule file has no thresholds");
  eval->add_option("--sample", c.sample, "Evaluate this many sampled streams (0: all)");
  eval->add_option("--seed", c.seed, "Sampling seed");
  eval->add_flag("--table", c.table, "Print a table to stdout");
  eval->add_option("--out", c.out, "Report JSON");
  eval->add_option("--text-mode", mode_text, "Token preprocessing")->check(CLI::IsMember({"passthrough", "heuristic"}));
  add_threads(eval);

  auto* sweep = app.add_subcommand("sweep", "Evaluate a grid of thresholds");
  add_mining(sweep);
  sweep->add_option("--grid", grid_text, "Comma-separated supp:conf points");
  sweep->add_option("--eval-features", c.eval_features, "Evaluation features (default: --features)");
  sweep->add_option("--eval-annotations", c.eval_annotations, "Evaluation annotations (default: --annotations)");
  sweep->add_option("--sample", c.sample, "Evaluate this many sampled streams (0: all)");
  sweep->add_option("--seed", c.seed, "Sampling seed");
  sweep->add_flag("--table", c.table, "Print a table to stdout");
  sweep->add_option("--out", c.out, "Report JSON");

  auto* merge = app.add_subcommand("merge", "Join rule files");
  merge->add_option("--in", c.inputs, "Rule file (repeatable)");
  merge->add_option("--out", c.out, "Merged rule file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    c.command = app.get_subcommands().front()->get_name();
    c.conf_min = Rational::parse(conf_text);
    c.text_mode = parse_text_mode(mode_text);
    if (max_len > 0) c.max_len = max_len;
    if (c.command == "sweep") c.grid = parse_grid(grid_text);
    c.threads = resolve_thread_flag(threads >= 0 ? std::optional<unsigned>(static_cast<unsigned>(threads)) : std::nullopt);
    c.validate();
  } catch (const UsageError& e) {
    err << "xmr: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "xmr: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "xmr: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "xmr: " << e.what() << '\n';
    return kExitFailure;
  }

  try {
    if (c.command == "build-transactions") return cmd_build_transactions(c, out);
    if (c.command == "mine") return cmd_mine(c, out);
    if (c.command == "infer") return cmd_infer(c, out);
    if (c.command == "eval") return cmd_eval(c, out);
    if (c.command == "sweep") return cmd_sweep(c, out);
    return cmd_merge(c, out);
  } catch (const std::exception& e) {
    err << "xmr " << c.command << ": " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace xmr::cli
