#include "xmr/text_filter.hpp"

#include <algorithm>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "xmr/error.hpp"

namespace xmr {

namespace {

const std::unordered_set<std::string_view>& stopwords() {
  static const std::unordered_set<std::string_view> words = {
      // articles, determiners, quantifiers
      "a", "an", "the", "this", "that", "these", "those", "all", "any", "both", "each", "every", "few",
      "more", "most", "other", "some", "such", "no", "nor", "not", "only", "own", "same", "too", "very",
      "another", "either", "neither", "much", "many", "several", "enough", "less", "least",
      // pronouns
      "i", "me", "my", "myself", "we", "us", "our", "ours", "ourselves", "you", "your", "yours", "yourself",
      "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself",
      "they", "them", "their", "theirs", "themselves", "what", "which", "who", "whom", "whose", "one",
      "ones", "someone", "everyone", "anyone", "somebody", "everybody",
      // prepositions
      "of", "at", "by", "for", "with", "about", "against", "between", "into", "through", "before", "after",
      "above", "below", "to", "from", "up", "down", "in", "out", "on", "off", "over", "under", "upon",
      "onto", "within", "without", "among", "around", "across", "along", "behind", "beside", "besides",
      "near", "toward", "towards", "via", "per", "throughout", "inside", "outside",
      // conjunctions and connectives
      "and", "or", "but", "so", "yet", "if", "then", "than", "because", "as", "while", "until", "though",
      "although", "unless", "whether", "also", "again", "once", "here", "there", "when", "where", "why",
      "how", "just", "even", "still",
      // auxiliaries and modals
      "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had", "having", "do", "does",
      "did", "doing", "done", "can", "could", "will", "would", "shall", "should", "may", "might", "must",
      "ought",
      // contraction fragments left after punctuation stripping
      "s", "t", "d", "ll", "m", "re", "ve", "o", "y", "don", "didn", "doesn", "isn", "wasn", "weren",
      "aren", "hasn", "haven", "hadn", "shouldn", "wouldn", "couldn", "mustn", "dont", "didnt", "doesnt",
      "isnt", "wasnt", "cant", "wont", "im", "ive", "youre", "theyre", "thats", "theres", "lets", "its"};
  return words;
}

// Forms the suffix rules would mangle, plus irregular inflections.
const std::unordered_map<std::string_view, std::string_view>& exceptions() {
  static const std::unordered_map<std::string_view, std::string_view> table = {
      // irregular verbs
      {"arose", "arise"}, {"arisen", "arise"}, {"awoke", "awake"}, {"awoken", "awake"},
      {"beaten", "beat"}, {"became", "become"}, {"began", "begin"}, {"begun", "begin"},
      {"bent", "bend"}, {"bit", "bite"}, {"bitten", "bite"}, {"blew", "blow"}, {"blown", "blow"},
      {"broke", "break"}, {"broken", "break"}, {"brought", "bring"}, {"built", "build"},
      {"burnt", "burn"}, {"bought", "buy"}, {"caught", "catch"}, {"chose", "choose"},
      {"chosen", "choose"}, {"came", "come"}, {"crept", "creep"}, {"dealt", "deal"}, {"dug", "dig"},
      {"dove", "dive"}, {"drew", "draw"}, {"drawn", "draw"}, {"dreamt", "dream"}, {"drank", "drink"},
      {"drunk", "drink"}, {"drove", "drive"}, {"driven", "drive"}, {"ate", "eat"}, {"eaten", "eat"},
      {"fell", "fall"}, {"fallen", "fall"}, {"fed", "feed"}, {"felt", "feel"}, {"fought", "fight"},
      {"found", "find"}, {"fled", "flee"}, {"flew", "fly"}, {"flown", "fly"}, {"forgot", "forget"},
      {"forgotten", "forget"}, {"forgave", "forgive"}, {"forgiven", "forgive"}, {"froze", "freeze"},
      {"frozen", "freeze"}, {"got", "get"}, {"gotten", "get"}, {"gave", "give"}, {"given", "give"},
      {"went", "go"}, {"gone", "go"}, {"goes", "go"}, {"grew", "grow"}, {"grown", "grow"},
      {"hung", "hang"}, {"heard", "hear"}, {"hid", "hide"}, {"hidden", "hide"}, {"held", "hold"},
      {"kept", "keep"}, {"knelt", "kneel"}, {"knew", "know"}, {"known", "know"}, {"laid", "lay"},
      {"led", "lead"}, {"left", "leave"}, {"lent", "lend"}, {"lain", "lie"}, {"lit", "light"},
      {"lost", "lose"}, {"made", "make"}, {"meant", "mean"}, {"met", "meet"}, {"paid", "pay"},
      {"rode", "ride"}, {"ridden", "ride"}, {"rang", "ring"}, {"rung", "ring"}, {"rose", "rise"},
      {"risen", "rise"}, {"ran", "run"}, {"said", "say"}, {"saw", "see"}, {"seen", "see"},
      {"sought", "seek"}, {"sold", "sell"}, {"sent", "send"}, {"shook", "shake"}, {"shaken", "shake"},
      {"shone", "shine"}, {"shot", "shoot"}, {"shown", "show"}, {"shrank", "shrink"},
      {"shrunk", "shrink"}, {"sang", "sing"}, {"sung", "sing"}, {"sank", "sink"}, {"sunk", "sink"},
      {"sat", "sit"}, {"slept", "sleep"}, {"slid", "slide"}, {"spoke", "speak"}, {"spoken", "speak"},
      {"sped", "speed"}, {"spent", "spend"}, {"spun", "spin"}, {"spat", "spit"}, {"sprang", "spring"},
      {"sprung", "spring"}, {"stood", "stand"}, {"stole", "steal"}, {"stolen", "steal"},
      {"stuck", "stick"}, {"stung", "sting"}, {"strode", "stride"}, {"struck", "strike"},
      {"swore", "swear"}, {"sworn", "swear"}, {"swept", "sweep"}, {"swam", "swim"}, {"swum", "swim"},
      {"swung", "swing"}, {"took", "take"}, {"taken", "take"}, {"taught", "teach"}, {"tore", "tear"},
      {"torn", "tear"}, {"told", "tell"}, {"thought", "think"}, {"threw", "throw"},
      {"thrown", "throw"}, {"understood", "understand"}, {"woke", "wake"}, {"woken", "wake"},
      {"wore", "wear"}, {"worn", "wear"}, {"wove", "weave"}, {"woven", "weave"}, {"wept", "weep"},
      {"won", "win"}, {"wrote", "write"}, {"written", "write"}, {"withdrew", "withdraw"},
      {"overcame", "overcome"}, {"undertook", "undertake"},
      // -ed/-ing forms the suffix rules get wrong
      {"used", "use"}, {"using", "use"}, {"tied", "tie"}, {"died", "die"}, {"lied", "lie"},
      {"dying", "die"}, {"lying", "lie"}, {"tying", "tie"}, {"seeing", "see"}, {"fleeing", "flee"},
      {"agreeing", "agree"}, {"created", "create"}, {"creating", "create"}, {"excited", "excite"},
      {"exciting", "excite"}, {"smiled", "smile"}, {"smiling", "smile"},
      // irregular plurals
      {"men", "man"}, {"women", "woman"}, {"children", "child"}, {"feet", "foot"}, {"teeth", "tooth"},
      {"geese", "goose"}, {"mice", "mouse"}, {"knives", "knife"}, {"wives", "wife"}, {"lives", "life"},
      {"leaves", "leaf"}, {"wolves", "wolf"}, {"shelves", "shelf"}, {"halves", "half"},
      {"loaves", "loaf"}, {"thieves", "thief"}, {"calves", "calf"}, {"scarves", "scarf"},
      {"elves", "elf"}, {"potatoes", "potato"}, {"tomatoes", "tomato"}, {"heroes", "hero"},
      {"echoes", "echo"}, {"volcanoes", "volcano"}, {"buses", "bus"}, {"gases", "gas"},
      {"cacti", "cactus"}, {"fungi", "fungus"}, {"oxen", "ox"}, {"firemen", "fireman"},
      {"policemen", "policeman"}, {"grandchildren", "grandchild"},
      // comparatives and superlatives
      {"better", "good"}, {"best", "good"}, {"worse", "bad"}, {"worst", "bad"}, {"bigger", "big"},
      {"biggest", "big"}, {"smaller", "small"}, {"smallest", "small"}, {"larger", "large"},
      {"largest", "large"}, {"older", "old"}, {"oldest", "old"}, {"elder", "old"}, {"eldest", "old"},
      {"younger", "young"}, {"youngest", "young"}, {"happier", "happy"}, {"happiest", "happy"},
      {"higher", "high"}, {"highest", "high"}, {"taller", "tall"}, {"tallest", "tall"},
      {"longer", "long"}, {"longest", "long"}, {"greater", "great"}, {"greatest", "great"},
      {"nicer", "nice"}, {"nicest", "nice"}, {"prettier", "pretty"}, {"prettiest", "pretty"},
      {"funnier", "funny"}, {"funniest", "funny"}, {"closer", "close"}, {"closest", "close"},
      {"faster", "fast"}, {"fastest", "fast"}, {"hotter", "hot"}, {"hottest", "hot"},
      {"colder", "cold"}, {"coldest", "cold"}, {"newer", "new"}, {"newest", "new"},
      {"easier", "easy"}, {"easiest", "easy"}, {"harder", "hard"}, {"hardest", "hard"},
      {"farther", "far"}, {"farthest", "far"}, {"furthest", "far"}, {"earlier", "early"},
      {"earliest", "early"}, {"later", "late"}, {"latest", "late"}, {"busier", "busy"},
      {"busiest", "busy"}, {"warmer", "warm"}, {"warmest", "warm"}, {"brighter", "bright"},
      {"brightest", "bright"}, {"darker", "dark"}, {"darkest", "dark"}, {"deeper", "deep"},
      {"deepest", "deep"}, {"cuter", "cute"}, {"cutest", "cute"}, {"sweeter", "sweet"},
      {"sweetest", "sweet"}, {"wider", "wide"}, {"widest", "wide"}, {"stronger", "strong"},
      {"strongest", "strong"}, {"louder", "loud"}, {"loudest", "loud"}, {"cooler", "cool"},
      {"coolest", "cool"}, {"safer", "safe"}, {"safest", "safe"}, {"wiser", "wise"},
      {"friendlier", "friendly"}, {"friendliest", "friendly"}, {"lovelier", "lovely"},
      {"loveliest", "lovely"}, {"bravest", "brave"}, {"finest", "fine"}, {"richest", "rich"},
  };
  return table;
}

// Words that look inflected but are not.
const std::unordered_set<std::string_view>& invariant_words() {
  static const std::unordered_set<std::string_view> words = {
      "morning", "evening", "ceiling", "wedding", "clothing", "nothing", "something", "anything",
      "everything", "during", "pudding", "lightning", "icing", "awning", "earring", "railing",
      "sibling", "duckling", "hundred", "sacred", "naked", "wicked", "clothes", "news", "series",
      "species", "jeans", "pants", "always", "perhaps", "sometimes", "afterwards", "downstairs",
      "upstairs", "outdoors", "indoors", "thanks", "christmas", "texas", "paris", "lens", "seed",
      "speed", "need", "feed", "bleed", "steed", "breed", "weed", "reed", "tweed", "greed",
  };
  return words;
}

bool is_vowel_at(std::string_view w, std::size_t i) {
  switch (w[i]) {
    case 'a': case 'e': case 'i': case 'o': case 'u':
      return true;
    case 'y':
      return i > 0 && !is_vowel_at(w, i - 1);
    default:
      return false;
  }
}

bool has_vowel(std::string_view w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (is_vowel_at(w, i)) return true;
  }
  return false;
}

// Number of vowel-consonant sequences: [C](VC)^m[V].
int measure(std::string_view w) {
  int m = 0;
  bool prev_vowel = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const bool v = is_vowel_at(w, i);
    if (prev_vowel && !v) ++m;
    prev_vowel = v;
  }
  return m;
}

// Consonant-vowel-consonant ending where the last consonant is not w, x or y.
bool ends_cvc(std::string_view w) {
  const std::size_t n = w.size();
  if (n < 3) return false;
  if (is_vowel_at(w, n - 1) || !is_vowel_at(w, n - 2) || is_vowel_at(w, n - 3)) return false;
  const char last = w[n - 1];
  return last != 'w' && last != 'x' && last != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

// Repairs a stem left by stripping -ing or -ed.
std::string repair_stem(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel_at(stem, n - 1)) {
    const char c = stem[n - 1];
    if (c != 'l' && c != 's' && c != 'z') stem.pop_back();
    return stem;
  }
  if (measure(stem) == 1 && ends_cvc(stem)) return stem + 'e';
  if (stem[n - 1] == 'v' || (stem[n - 1] == 'c' && !is_vowel_at(stem, n - 2))) return stem + 'e';
  if (ends_with(stem, "iz") || ends_with(stem, "tur")) return stem + 'e';
  if (n >= 3 && ends_with(stem, "at") && !is_vowel_at(stem, n - 3) && measure(stem) >= 2) return stem + 'e';
  return stem;
}

void sort_unique(WordSet& words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
}

}  // namespace

TextMode parse_text_mode(std::string_view name) {
  if (name == "passthrough") return TextMode::passthrough;
  if (name == "heuristic") return TextMode::heuristic;
  throw DomainError("unknown text mode '" + std::string(name) + "'");
}

std::string_view to_string(TextMode mode) noexcept {
  return mode == TextMode::heuristic ? "heuristic" : "passthrough";
}

bool is_stopword(std::string_view word) { return stopwords().contains(word); }

std::string lemmatize(std::string_view word) {
  if (const auto it = exceptions().find(word); it != exceptions().end()) return std::string(it->second);
  if (word.size() <= 3 || invariant_words().contains(word)) return std::string(word);
  const std::string w(word);
  const std::size_t n = w.size();

  if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is")) return w;
  if (ends_with(w, "ies") && n > 4) return w.substr(0, n - 3) + 'y';
  if (ends_with(w, "sses") || ends_with(w, "ches") || ends_with(w, "shes") || ends_with(w, "xes") ||
      ends_with(w, "zzes")) {
    return w.substr(0, n - 2);
  }
  if (w.back() == 's') return w.substr(0, n - 1);

  if (ends_with(w, "eed")) {
    return measure(std::string_view(w).substr(0, n - 3)) > 0 ? w.substr(0, n - 1) : w;
  }
  if (ends_with(w, "ied") && n > 4) return w.substr(0, n - 3) + 'y';
  if (ends_with(w, "ing")) {
    const std::string stem = w.substr(0, n - 3);
    if (stem.size() >= 2 && has_vowel(stem)) return repair_stem(stem);
    return w;
  }
  if (ends_with(w, "ed")) {
    const std::string stem = w.substr(0, n - 2);
    if (stem.size() >= 2 && has_vowel(stem)) return repair_stem(stem);
    return w;
  }
  return w;
}

std::vector<std::string> normalize_tokens(std::span<const std::string> tokens, TextMode mode) {
  if (mode == TextMode::passthrough) return {tokens.begin(), tokens.end()};
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (token.empty() || is_stopword(token)) continue;
    std::string lemma = lemmatize(token);
    if (lemma.empty() || is_stopword(lemma)) continue;
    out.push_back(std::move(lemma));
  }
  return out;
}

WordSet preprocess_tokens(std::span<const std::vector<std::string>> sentences, TextMode mode) {
  WordSet words;
  for (const auto& sentence : sentences) {
    auto normalized = normalize_tokens(sentence, mode);
    words.insert(words.end(), std::make_move_iterator(normalized.begin()),
                 std::make_move_iterator(normalized.end()));
  }
  sort_unique(words);
  return words;
}

WordSet preprocess_tokens(std::span<const std::string> tokens, TextMode mode) {
  WordSet words = normalize_tokens(tokens, mode);
  sort_unique(words);
  return words;
}

}  // namespace xmr
