#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace newsbias {

/// Collects the values of every `Sitemap:` directive in a robots.txt body.
/// Keys match case-insensitively, values are trimmed, relative values are
/// resolved against `base_url`, and duplicates keep their first position.
/// Everything else in the file is ignored; this never fails.
std::vector<std::string> parse_robots(std::string_view robots_text, std::string_view base_url);

}  // namespace newsbias
