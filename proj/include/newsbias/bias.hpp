#pragma once

#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace newsbias {

/// Set of bias-indicative single-word terms, lowercase. Immutable once
/// loaded, so one instance can be shared across threads.
struct BiasLexicon {
  std::set<std::string, std::less<>> terms;
  std::string name;
  std::string version;

  bool contains(std::string_view token) const { return terms.find(token) != terms.end(); }
  std::size_t size() const { return terms.size(); }
};

struct SentenceVerdict {
  std::string text;
  bool biased = false;
  std::vector<std::string> hits;  // token order, deduplicated
};

struct BiasScore {
  double score = 0.0;
  std::size_t total = 0;
  std::size_t biased = 0;
};

struct BiasAnalysis {
  BiasScore score;
  std::vector<SentenceVerdict> sentences;
};

/// Newline-delimited word list; `#` starts a comment line. Terms are trimmed,
/// lowercased and deduplicated; lines holding more than one word are skipped.
/// Throws Error{EmptyLexicon} when nothing remains.
BiasLexicon load_lexicon(std::string_view text, std::string name = "custom", std::string version = "1");

/// Small placeholder lexicon of hedges, intensifiers and loaded words shipped
/// with the tool. Scores are only comparable under one fixed lexicon.
const BiasLexicon& default_lexicon();

/// Splits on `.`, `!` or `?` followed by whitespace or end of input. Trailing
/// closing quotes/brackets stay with their sentence. A single period ending a
/// known abbreviation (Mr., Dr., U.S., e.g., ...) does not end a sentence.
std::vector<std::string> split_sentences(std::string_view text);

/// Lowercased runs of alphanumeric bytes; bytes >= 0x80 count as word bytes so
/// UTF-8 words stay whole.
std::vector<std::string> word_tokens(std::string_view text);

SentenceVerdict is_biased_sentence(std::string_view sentence, const BiasLexicon& lexicon);

/// Per-sentence verdicts plus the aggregate. Throws Error{EmptyDocument} when
/// the text has no sentences and Error{EmptyLexicon} for an empty lexicon.
BiasAnalysis analyze_bias(std::string_view text, const BiasLexicon& lexicon);

/// Fraction of sentences holding at least one lexicon term.
BiasScore score_text(std::string_view text, const BiasLexicon& lexicon);

}  // namespace newsbias
