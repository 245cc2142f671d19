#include "xmr/rules.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "jsonl.hpp"
#include "xmr/error.hpp"
#include "xmr/parallel.hpp"

namespace xmr {

using detail::Json;

namespace {

bool key_less(const CrossModalRule& a, const CrossModalRule& b) {
  if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
  return a.consequent < b.consequent;
}

bool same_key(const CrossModalRule& a, const CrossModalRule& b) {
  return a.consequent == b.consequent && a.antecedent == b.antecedent;
}

std::string describe(const CrossModalRule& rule) {
  std::string s = "{";
  for (std::size_t i = 0; i < rule.antecedent.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(rule.antecedent[i]);
  }
  return s + "} => " + std::to_string(rule.consequent);
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

Rational confidence(Count joint, Count ante) {
  if (ante == 0) throw DomainError("confidence with zero antecedent support");
  if (joint == 0 || joint > ante) {
    throw DomainError("confidence needs 0 < joint <= ante, got " + std::to_string(joint) + "/" + std::to_string(ante));
  }
  return Rational(joint, ante);
}

void validate_rule(const CrossModalRule& rule, const StoreContext& context) {
  const auto fail = [&](const std::string& why) { throw InvariantError("rule " + describe(rule) + ": " + why); };
  if (rule.antecedent.empty()) fail("empty antecedent");
  if (!is_strictly_ascending(rule.antecedent)) fail("antecedent not strictly ascending");
  if (rule.antecedent.back() >= context.feature_dim) fail("antecedent holds a word item");
  if (rule.consequent < context.feature_dim) fail("consequent is a visual item");
  if (context.vocab_size == 0 || rule.consequent - context.feature_dim >= context.vocab_size - 1) {
    fail("consequent outside the vocabulary");
  }
  if (rule.joint == 0 || rule.joint > rule.ante) fail("support counts violate 0 < joint <= ante");
}

RuleStore::RuleStore(StoreContext context, std::vector<RuleEntry> entries, std::optional<Thresholds> thresholds)
    : context_(context), entries_(std::move(entries)), thresholds_(thresholds) {
  for (const auto& e : entries_) {
    validate_rule(e.rule, context_);
    if (thresholds_ &&
        !(thresholds_->passes_support(e.rule.joint) && thresholds_->passes_confidence(e.rule.confidence()))) {
      throw InvariantError("rule " + describe(e.rule) + " does not clear the store thresholds");
    }
  }
  std::sort(entries_.begin(), entries_.end(), [](const RuleEntry& a, const RuleEntry& b) { return key_less(a.rule, b.rule); });
  const auto dup = std::adjacent_find(entries_.begin(), entries_.end(),
                                      [](const RuleEntry& a, const RuleEntry& b) { return same_key(a.rule, b.rule); });
  if (dup != entries_.end()) throw InvariantError("duplicate rule " + describe(dup->rule));
}

const RuleEntry* RuleStore::find(ItemSpan antecedent, Item consequent) const {
  for (const auto& e : with_antecedent(antecedent)) {
    if (e.rule.consequent == consequent) return &e;
  }
  return nullptr;
}

std::span<const RuleEntry> RuleStore::with_antecedent(ItemSpan antecedent) const {
  const auto cmp_lo = [](const RuleEntry& e, ItemSpan key) {
    return std::lexicographical_compare(e.rule.antecedent.begin(), e.rule.antecedent.end(), key.begin(), key.end());
  };
  const auto cmp_hi = [](ItemSpan key, const RuleEntry& e) {
    return std::lexicographical_compare(key.begin(), key.end(), e.rule.antecedent.begin(), e.rule.antecedent.end());
  };
  const auto lo = std::lower_bound(entries_.begin(), entries_.end(), antecedent, cmp_lo);
  const auto hi = std::upper_bound(lo, entries_.end(), antecedent, cmp_hi);
  return {lo, hi};
}

std::size_t RuleStore::concept_count() const {
  std::set<Item> consequents;
  for (const auto& e : entries_) consequents.insert(e.rule.consequent);
  return consequents.size();
}

RuleStore generate_rules(const FrequentItemsetTable& frequent, std::size_t feature_dim, const Vocabulary& vocab,
                         const RuleGenOptions& options) {
  options.thresholds.validate();
  const auto& itemsets = frequent.itemsets();
  const unsigned workers = resolve_threads(options.threads);
  const std::size_t chunk = 4096;
  const std::size_t chunks = (itemsets.size() + chunk - 1) / chunk;
  std::vector<std::vector<RuleEntry>> parts(chunks);

  parallel_for(chunks, workers, [&](unsigned, std::size_t c) {
    const std::size_t end = std::min(itemsets.size(), (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      const auto& z = itemsets[i];
      const std::size_t n = z.items.size();
      // Exactly one word item (the largest id) and at least one visual item.
      if (n < 2 || z.items[n - 1] < feature_dim || z.items[n - 2] >= feature_dim) continue;
      if (!options.thresholds.passes_support(z.support)) continue;

      CrossModalRule rule;
      rule.antecedent.assign(z.items.begin(), z.items.end() - 1);
      rule.consequent = z.items[n - 1];
      rule.joint = z.support;
      const auto ante = frequent.find(rule.antecedent);
      if (!ante) throw ClosureError("antecedent of " + describe(rule) + " is missing from the frequent itemsets");
      rule.ante = *ante;
      if (!options.thresholds.passes_confidence(confidence(rule.joint, rule.ante))) continue;

      const auto word_index = rule.consequent - feature_dim;
      if (word_index >= vocab.word_count()) throw InvariantError("consequent of " + describe(rule) + " is not a vocabulary word");
      RuleEntry entry{rule, vocab.word(static_cast<std::uint32_t>(word_index)), {{options.tag, rule.joint, rule.ante}}};
      parts[c].push_back(std::move(entry));
    }
  });

  std::vector<RuleEntry> entries;
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(entries));
  return RuleStore(StoreContext::from(feature_dim, vocab), std::move(entries), options.thresholds);
}

RuleStore merge_stores(const RuleStore& a, const RuleStore& b) {
  if (a.feature_dim() != b.feature_dim()) {
    throw IncompatibleStoreError("cannot merge stores with feature_dim " + std::to_string(a.feature_dim()) + " and " +
                                 std::to_string(b.feature_dim()));
  }
  if (a.context() != b.context()) {
    throw RemapRequiredError("stores were built against different vocabularies; remap word ids before merging");
  }

  std::vector<RuleEntry> merged;
  merged.reserve(a.size() + b.size());
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && key_less(ia->rule, ib->rule))) {
      merged.push_back(*ia++);
    } else if (ia == a.end() || key_less(ib->rule, ia->rule)) {
      merged.push_back(*ib++);
    } else {
      const Rational ca = ia->rule.confidence();
      const Rational cb = ib->rule.confidence();
      const bool take_b = cb > ca || (cb == ca && ib->rule.joint > ia->rule.joint);
      RuleEntry winner = take_b ? *ib : *ia;
      winner.provenance = ia->provenance;
      winner.provenance.insert(winner.provenance.end(), ib->provenance.begin(), ib->provenance.end());
      merged.push_back(std::move(winner));
      ++ia;
      ++ib;
    }
  }

  // Thresholds survive when both sides agree, or when one side is an empty
  // store that cannot contradict the other.
  std::optional<Thresholds> thresholds;
  if (a.thresholds() == b.thresholds()) {
    thresholds = a.thresholds();
  } else if (b.empty() && (!a.empty() || !b.thresholds())) {
    thresholds = a.thresholds();
  } else if (a.empty() && (!b.empty() || !a.thresholds())) {
    thresholds = b.thresholds();
  }
  return RuleStore(a.context(), std::move(merged), thresholds);
}

void save_store(const RuleStore& store, const std::filesystem::path& path) {
  std::string out;
  Json header;
  header["format"] = "xmr-rules";
  header["version"] = kRuleFormatVersion;
  header["feature_dim"] = store.context().feature_dim;
  header["vocab_size"] = store.context().vocab_size;
  header["vocab_fingerprint"] = hex(store.context().vocab_fingerprint);
  header["rule_count"] = store.size();
  if (const auto& t = store.thresholds()) {
    header["thresholds"] = Json{{"supp_min", t->supp_min},
                                {"conf_min", {t->conf_min.num(), t->conf_min.den()}},
                                {"strict", t->strict}};
  }
  out += header.dump();
  out += '\n';
  for (const auto& e : store) {
    Json line;
    line["antecedent"] = e.rule.antecedent;
    line["consequent"] = e.rule.consequent;
    line["word"] = e.word;
    line["joint"] = e.rule.joint;
    line["ante"] = e.rule.ante;
    auto& prov = line["provenance"] = Json::array();
    for (const auto& p : e.provenance) prov.push_back(Json{{"tag", p.tag}, {"joint", p.joint}, {"ante", p.ante}});
    out += line.dump();
    out += '\n';
  }
  detail::write_text(path, out);
}

namespace {

template <typename T>
T field(const detail::LineReader& reader, const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) reader.fail(std::string("missing \"") + key + "\"");
  const Json& v = obj[key];
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) reader.fail(std::string("\"") + key + "\" must be a string");
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) reader.fail(std::string("\"") + key + "\" must be a boolean");
  } else {
    if (!v.is_number_unsigned()) reader.fail(std::string("\"") + key + "\" must be an unsigned integer");
  }
  return v.get<T>();
}

}  // namespace

RuleStore load_store(const std::filesystem::path& path) {
  detail::LineReader reader(path);
  if (!reader.next()) throw ParseError(path.string() + ": empty rule file", 0, 0);

  const Json header = reader.parse();
  if (!header.is_object() || !header.contains("format") || header["format"] != "xmr-rules") {
    throw FormatVersionError(path.string() + ": not an xmr-rules file");
  }
  if (!header.contains("version") || header["version"] != kRuleFormatVersion) {
    throw FormatVersionError(path.string() + ": unsupported rule format version " +
                             (header.contains("version") ? header["version"].dump() : std::string("(none)")) +
                             ", expected " + std::to_string(kRuleFormatVersion));
  }
  StoreContext context;
  context.feature_dim = field<std::size_t>(reader, header, "feature_dim");
  context.vocab_size = field<std::size_t>(reader, header, "vocab_size");
  const auto fingerprint = field<std::string>(reader, header, "vocab_fingerprint");
  try {
    std::size_t used = 0;
    context.vocab_fingerprint = std::stoull(fingerprint, &used, 16);
    if (used != fingerprint.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    reader.fail("malformed vocab_fingerprint");
  }
  const auto rule_count = field<std::size_t>(reader, header, "rule_count");
  std::optional<Thresholds> thresholds;
  if (header.contains("thresholds")) {
    const Json& t = header["thresholds"];
    Thresholds th;
    th.supp_min = field<Count>(reader, t, "supp_min");
    th.strict = field<bool>(reader, t, "strict");
    const Json& conf = t.contains("conf_min") ? t["conf_min"] : Json();
    if (!conf.is_array() || conf.size() != 2 || !conf[0].is_number_unsigned() || !conf[1].is_number_unsigned() ||
        conf[1].get<std::uint64_t>() == 0) {
      reader.fail("\"conf_min\" must be a [num, den] pair");
    }
    th.conf_min = Rational(conf[0].get<std::uint64_t>(), conf[1].get<std::uint64_t>());
    thresholds = th;
  }

  std::vector<RuleEntry> entries;
  entries.reserve(rule_count);
  while (reader.next()) {
    const Json line = reader.parse();
    RuleEntry e;
    if (!line.is_object() || !line.contains("antecedent") || !line["antecedent"].is_array()) {
      reader.fail("rule lacks an \"antecedent\" array");
    }
    for (const auto& item : line["antecedent"]) {
      if (!item.is_number_unsigned()) reader.fail("antecedent item is not an unsigned integer");
      e.rule.antecedent.push_back(item.get<Item>());
    }
    e.rule.consequent = field<Item>(reader, line, "consequent");
    e.word = field<std::string>(reader, line, "word");
    e.rule.joint = field<Count>(reader, line, "joint");
    e.rule.ante = field<Count>(reader, line, "ante");
    if (!line.contains("provenance") || !line["provenance"].is_array()) reader.fail("rule lacks a \"provenance\" array");
    for (const auto& p : line["provenance"]) {
      e.provenance.push_back(
          {field<std::string>(reader, p, "tag"), field<Count>(reader, p, "joint"), field<Count>(reader, p, "ante")});
    }
    try {
      validate_rule(e.rule, context);
    } catch (const InvariantError& err) {
      throw InvariantError(path.string() + ":" + std::to_string(reader.line()) + ": " + err.what());
    }
    entries.push_back(std::move(e));
  }
  if (entries.size() != rule_count) {
    throw ParseError(path.string() + ": truncated at byte " + std::to_string(reader.end_offset()) + ": header declares " +
                         std::to_string(rule_count) + " rules, found " + std::to_string(entries.size()),
                     reader.line(), reader.end_offset());
  }
  try {
    return RuleStore(context, std::move(entries), thresholds);
  } catch (const InvariantError& err) {
    throw InvariantError(path.string() + ": " + err.what());
  }
}

}  // namespace xmr
