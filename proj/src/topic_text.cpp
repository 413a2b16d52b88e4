#include "newsbias/topic_text.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "newsbias/bias.hpp"

namespace newsbias {

namespace {

const std::unordered_set<std::string_view>& stopwords() {
  static const std::unordered_set<std::string_view> words = {
      "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any", "are",
      "aren", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both", "but",
      "by", "can", "could", "did", "didn", "do", "does", "doesn", "doing", "don", "down", "during", "each",
      "even", "few", "for", "from", "further", "get", "got", "had", "has", "have", "having", "he", "her",
      "here", "hers", "herself", "him", "himself", "his", "how", "however", "i", "if", "in", "into", "is",
      "isn", "it", "its", "itself", "just", "last", "like", "made", "make", "many", "may", "me", "might",
      "more", "most", "much", "must", "my", "myself", "new", "no", "nor", "not", "now", "of", "off", "on",
      "once", "one", "only", "or", "other", "our", "ours", "ourselves", "out", "over", "own", "said",
      "same", "say", "says", "she", "should", "since", "so", "some", "still", "such", "than", "that", "the",
      "their", "theirs", "them", "themselves", "then", "there", "these", "they", "this", "those", "though",
      "through", "to", "too", "two", "under", "until", "up", "upon", "us", "very", "was", "wasn", "we",
      "well", "were", "weren", "what", "when", "where", "whether", "which", "while", "who", "whom", "whose",
      "why", "will", "with", "within", "without", "won", "would", "year", "years", "yet", "you", "your",
      "yours", "yourself", "yourselves", "according", "told", "week", "among", "across", "around"};
  return words;
}

}  // namespace

bool is_stopword(std::string_view word) { return stopwords().count(word) > 0; }

std::vector<std::string> topic_tokens(std::string_view text) {
  auto tokens = word_tokens(text);
  std::erase_if(tokens, [](const std::string& t) { return t.size() < 3 || is_stopword(t); });
  return tokens;
}

void drop_rare_words(std::vector<std::vector<std::string>>& docs, std::size_t min_count) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& doc : docs)
    for (const auto& w : doc) ++counts[w];
  for (auto& doc : docs) std::erase_if(doc, [&](const std::string& w) { return counts[w] < min_count; });
}

}  // namespace newsbias
