#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace newsbias {

/// A configured outlet. `leaning` runs from -1 (liberal readership) to +1
/// (conservative readership).
struct NewsSource {
  std::string id;
  std::string name;
  std::string home_url;
  double leaning = 0.0;
  bool mainstream = false;
  std::int64_t crawl_delay_ms = 1000;
  std::optional<std::string> icon_ref;
  // Where robots.txt lives; defaults to `<origin of home_url>/robots.txt`.
  std::optional<std::string> robots_url;
  // Sitemap used when robots.txt is missing or names no sitemap.
  std::optional<std::string> fallback_sitemap;

  std::string effective_robots_url() const;
};

/// Parses an INI document: one `[id]` section per source with keys name,
/// home_url, leaning, mainstream, crawl_delay_ms and optional icon_ref,
/// robots_url, fallback_sitemap. Throws Error{InvalidConfig} on any violation.
std::vector<NewsSource> load_sources(std::string_view text);
std::vector<NewsSource> load_sources_file(const std::string& path);
std::string serialize_sources(const std::vector<NewsSource>& sources);

/// The five outlets the tool ships with, ordered liberal to conservative.
/// Leaning magnitudes are defaults only.
std::vector<NewsSource> default_sources();

}  // namespace newsbias
