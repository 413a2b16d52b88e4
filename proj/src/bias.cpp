#include "newsbias/bias.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "newsbias/error.hpp"

namespace newsbias {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u);
}
bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

constexpr std::array<std::string_view, 14> kAbbreviations = {
    "mr.", "mrs.", "ms.", "dr.", "prof.", "sr.", "jr.", "st.", "u.s.", "u.k.", "e.g.", "i.e.", "etc.", "vs."};

// `end` indexes the period. The candidate word runs back to the previous
// whitespace, minus leading punctuation such as an opening parenthesis.
bool ends_with_abbreviation(std::string_view text, std::size_t end) {
  std::size_t start = end;
  while (start > 0 && !is_space(text[start - 1])) --start;
  while (start < end && !is_word_byte(text[start])) ++start;
  const std::string word = ascii_lower(text.substr(start, end - start + 1));
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

// UTF-8 closing quotes: U+2019 and U+201D.
std::size_t utf8_closer_len(std::string_view text, std::size_t i) {
  if (i + 3 <= text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
      static_cast<unsigned char>(text[i + 1]) == 0x80) {
    const auto c = static_cast<unsigned char>(text[i + 2]);
    if (c == 0x99 || c == 0x9D) return 3;
  }
  return 0;
}

}  // namespace

BiasLexicon load_lexicon(std::string_view text, std::string name, std::string version) {
  BiasLexicon lex;
  lex.name = std::move(name);
  lex.version = std::move(version);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    if (line.empty() || line.front() == '#') continue;
    if (std::any_of(line.begin(), line.end(), is_space)) continue;
    lex.terms.insert(ascii_lower(line));
  }
  if (lex.terms.empty()) throw Error(ErrorCode::EmptyLexicon, "lexicon contains no terms");
  return lex;
}

const BiasLexicon& default_lexicon() {
  static const BiasLexicon lex = load_lexicon(
      R"(# hedges and assertives
allegedly
apparently
arguably
reportedly
supposedly
clearly
obviously
undoubtedly
certainly
definitely
absolutely
# intensifiers
totally
extremely
incredibly
truly
very
really
# factive and reporting verbs with stance
claimed
claims
insisted
admitted
conceded
slammed
blasted
# loaded words
outrageous
shocking
disgraceful
radical
extremist
regime
disaster
disastrous
catastrophic
chaos
crisis
corrupt
scandal
controversial
notorious
infamous
brutal
heroic
tragic
terrorist
militant
propaganda
fake
hoax
rigged
thug
reckless
dangerous
stunning
bombshell
unprecedented
)",
      "default-placeholder", "1");
  return lex;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  auto emit = [&](std::size_t end) {
    std::string_view s = trim(text.substr(start, end - start));
    if (!s.empty()) out.emplace_back(s);
    start = end;
  };
  while (i < text.size()) {
    if (!is_terminator(text[i])) {
      ++i;
      continue;
    }
    const std::size_t first = i;
    while (i < text.size() && is_terminator(text[i])) ++i;
    const bool single_period = i - first == 1 && text[first] == '.';
    std::size_t end = i;
    for (;;) {
      if (end < text.size() && is_closer(text[end])) {
        ++end;
      } else if (std::size_t n = utf8_closer_len(text, end)) {
        end += n;
      } else {
        break;
      }
    }
    if (end < text.size() && !is_space(text[end])) {
      i = end;
      continue;
    }
    if (single_period && end == i && ends_with_abbreviation(text, first)) continue;
    emit(end);
    i = end;
  }
  emit(text.size());
  return out;
}

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_byte(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && is_word_byte(text[i])) ++i;
    if (i > start) out.push_back(ascii_lower(text.substr(start, i - start)));
  }
  return out;
}

SentenceVerdict is_biased_sentence(std::string_view sentence, const BiasLexicon& lexicon) {
  SentenceVerdict v;
  v.text = std::string(sentence);
  for (auto& token : word_tokens(sentence)) {
    if (lexicon.contains(token) && std::find(v.hits.begin(), v.hits.end(), token) == v.hits.end())
      v.hits.push_back(std::move(token));
  }
  v.biased = !v.hits.empty();
  return v;
}

BiasAnalysis analyze_bias(std::string_view text, const BiasLexicon& lexicon) {
  if (lexicon.terms.empty()) throw Error(ErrorCode::EmptyLexicon, "lexicon contains no terms");
  BiasAnalysis result;
  for (const auto& sentence : split_sentences(text)) {
    result.sentences.push_back(is_biased_sentence(sentence, lexicon));
    if (result.sentences.back().biased) ++result.score.biased;
  }
  result.score.total = result.sentences.size();
  if (result.score.total == 0) throw Error(ErrorCode::EmptyDocument, "document has no sentences");
  result.score.score = static_cast<double>(result.score.biased) / static_cast<double>(result.score.total);
  return result;
}

BiasScore score_text(std::string_view text, const BiasLexicon& lexicon) {
  return analyze_bias(text, lexicon).score;
}

}  // namespace newsbias
