#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xmr {

enum class TextMode {
  /// Tokens are taken as already filtered and lemmatized upstream.
  passthrough,
  /// Built-in stopword filter followed by the rule-based lemmatizer.
  heuristic,
};

TextMode parse_text_mode(std::string_view name);
std::string_view to_string(TextMode mode) noexcept;

/// Sorted, duplicate-free word list.
using WordSet = std::vector<std::string>;

bool is_stopword(std::string_view word);

/// Lemma of a single lowercase word: irregular forms come from a fixed
/// exception table, everything else goes through suffix rules.
std::string lemmatize(std::string_view word);

/// Per-token normalization without deduplication. Heuristic mode drops
/// stopwords and lemmatizes the rest; passthrough returns the input.
std::vector<std::string> normalize_tokens(std::span<const std::string> tokens, TextMode mode);

/// Deduplicated union of the normalized tokens of every sentence.
WordSet preprocess_tokens(std::span<const std::vector<std::string>> sentences, TextMode mode);
WordSet preprocess_tokens(std::span<const std::string> tokens, TextMode mode);

}  // namespace xmr
