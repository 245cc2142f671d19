#include <gtest/gtest.h>

#include "xmr/error.hpp"
#include "xmr/text_filter.hpp"

namespace xmr {
namespace {

WordSet words(std::initializer_list<const char*> list) {
  WordSet out;
  for (const char* w : list) out.emplace_back(w);
  return out;
}

TEST(TextFilter, HeuristicDropsStopwordsAndLemmatizes) {
  const std::vector<std::string> tokens{"the", "dogs", "ran"};
  EXPECT_EQ(preprocess_tokens(tokens, TextMode::heuristic), words({"dog", "run"}));
}

TEST(TextFilter, PassthroughOnlyDeduplicates) {
  const std::vector<std::string> tokens{"dog", "dog"};
  EXPECT_EQ(preprocess_tokens(tokens, TextMode::passthrough), words({"dog"}));
  const std::vector<std::string> kept{"the", "dogs"};
  EXPECT_EQ(preprocess_tokens(kept, TextMode::passthrough), words({"dogs", "the"}));
}

TEST(TextFilter, EmptyInput) {
  const std::vector<std::string> none;
  EXPECT_TRUE(preprocess_tokens(none, TextMode::passthrough).empty());
  EXPECT_TRUE(preprocess_tokens(none, TextMode::heuristic).empty());
}

TEST(TextFilter, SentencesArePooled) {
  const std::vector<std::vector<std::string>> sentences{{"a", "dog", "runs"}, {"the", "dog", "is", "running"}};
  EXPECT_EQ(preprocess_tokens(sentences, TextMode::heuristic), words({"dog", "run"}));
}

TEST(Lemmatize, RegularSuffixes) {
  const std::pair<const char*, const char*> cases[] = {
      {"dogs", "dog"},     {"boxes", "box"},     {"churches", "church"}, {"cities", "city"},
      {"glass", "glass"},  {"bus", "bus"},       {"running", "run"},     {"stopped", "stop"},
      {"played", "play"},  {"hoping", "hope"},   {"making", "make"},     {"walked", "walk"},
      {"falling", "fall"}, {"kisses", "kiss"},   {"tried", "try"},       {"agreed", "agree"},
  };
  for (const auto& [in, out] : cases) EXPECT_EQ(lemmatize(in), out) << in;
}

TEST(Lemmatize, IrregularForms) {
  const std::pair<const char*, const char*> cases[] = {
      {"ran", "run"}, {"children", "child"}, {"went", "go"}, {"mice", "mouse"}, {"took", "take"},
  };
  for (const auto& [in, out] : cases) EXPECT_EQ(lemmatize(in), out) << in;
}

TEST(Lemmatize, ShortWordsSurvive) {
  EXPECT_EQ(lemmatize("is"), "is");
  EXPECT_EQ(lemmatize("sing"), "sing");
  EXPECT_EQ(lemmatize("red"), "red");
}

TEST(Stopwords, FunctionWordsOnly) {
  for (const char* w : {"the", "a", "and", "of", "is", "to"}) EXPECT_TRUE(is_stopword(w)) << w;
  for (const char* w : {"dog", "beach", "happy", "pumpkin"}) EXPECT_FALSE(is_stopword(w)) << w;
}

TEST(TextMode, ParsesNames) {
  EXPECT_EQ(parse_text_mode("heuristic"), TextMode::heuristic);
  EXPECT_EQ(parse_text_mode("passthrough"), TextMode::passthrough);
  EXPECT_EQ(to_string(TextMode::heuristic), "heuristic");
  EXPECT_THROW(parse_text_mode("nltk"), DomainError);
}

}  // namespace
}  // namespace xmr
