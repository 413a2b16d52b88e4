#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace newsbias {

/// Tokens fed to the topic model: lowercase alphanumeric runs, minus English
/// stopwords and anything shorter than three bytes.
std::vector<std::string> topic_tokens(std::string_view text);

bool is_stopword(std::string_view word);

/// Drops words whose total corpus frequency is below `min_count`.
void drop_rare_words(std::vector<std::vector<std::string>>& docs, std::size_t min_count = 2);

}  // namespace newsbias
