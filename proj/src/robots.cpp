#include "newsbias/robots.hpp"

#include <algorithm>
#include <cctype>

#include "newsbias/url.hpp"

namespace newsbias {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::vector<std::string> parse_robots(std::string_view text, std::string_view base_url) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find_first_of("\r\n", pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;

    // A comment starts at '#' at line start or after whitespace; '#' inside
    // a URL token is kept.
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '#' && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
        line = line.substr(0, i);
        break;
      }
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    if (!iequals(trim(line.substr(0, colon)), "sitemap")) continue;
    const std::string_view value = trim(line.substr(colon + 1));
    if (value.empty()) continue;

    std::string resolved = resolve_url(base_url, value);
    if (resolved.empty()) continue;
    if (std::find(out.begin(), out.end(), resolved) == out.end()) out.push_back(std::move(resolved));
  }
  return out;
}

}  // namespace newsbias
