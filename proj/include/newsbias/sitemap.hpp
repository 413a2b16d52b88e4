#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "newsbias/time.hpp"

namespace newsbias {

struct SitemapEntry {
  std::string loc;  // absolute URL
  std::optional<Timestamp> lastmod;

  friend bool operator==(const SitemapEntry&, const SitemapEntry&) = default;
};

struct UrlSet {
  std::vector<SitemapEntry> entries;
};

struct SitemapIndex {
  std::vector<std::string> sitemaps;
};

using SitemapDocument = std::variant<UrlSet, SitemapIndex>;

/// Maps a `<urlset>` or `<sitemapindex>` document onto its entries. Element
/// namespace prefixes are ignored. Entries without a usable absolute `<loc>`
/// are dropped, and an unparseable `<lastmod>` is treated as absent.
/// Throws Error{MalformedXml} or Error{UnknownRoot}.
SitemapDocument parse_sitemap(std::string_view xml_text);

std::string serialize_sitemap(const UrlSet& set);
std::string serialize_sitemap(const SitemapIndex& index);

}  // namespace newsbias
