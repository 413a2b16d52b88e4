#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "newsbias/article.hpp"
#include "newsbias/bias.hpp"
#include "newsbias/fetch.hpp"
#include "newsbias/sitemap.hpp"
#include "newsbias/source.hpp"

namespace newsbias {

struct CrawlOptions {
  std::size_t max_urls = 50;
  std::optional<Timestamp> since;
  /// Sitemap levels followed: 2 means index -> sitemaps -> URLs.
  int max_sitemap_depth = 2;
  /// Canonical-URL ids already stored; matching candidates are not refetched.
  std::set<std::string> known_ids;
  /// Scores each article when set.
  const BiasLexicon* lexicon = nullptr;
};

struct CrawlError {
  std::string url;
  std::string message;
};

struct CrawlResult {
  std::string source_id;
  std::vector<Article> articles;
  std::size_t candidates = 0;          // entries left after sort/truncate/since
  std::size_t skipped_extraction = 0;  // pages with no extractable article
  std::size_t skipped_known = 0;
  std::vector<CrawlError> errors;      // network and sitemap failures
};

/// Everything the crawler needs from the outside world.
struct CrawlContext {
  Fetcher& fetcher;
  PolitenessGate& gate;
  Clock& clock;
};

/// Gathers sitemap entries reachable from the given sitemap URLs, recursing
/// through sitemap indexes up to `max_depth` levels. Documents are merged in
/// visit order and duplicates (by canonical URL) keep their first position.
std::vector<SitemapEntry> collect_sitemap_entries(const std::vector<std::string>& sitemaps, const NewsSource& source,
                                                  CrawlContext& ctx, int max_depth, std::vector<CrawlError>& errors);

/// Newest first; entries without lastmod go last, document order otherwise.
void order_by_lastmod(std::vector<SitemapEntry>& entries);

/// robots.txt -> sitemaps -> newest entries -> article pages. Per-URL failures
/// are recorded in the result. Throws Error{RobotsUnavailable} when neither
/// robots.txt nor a configured fallback yields a sitemap.
CrawlResult crawl_source(const NewsSource& source, CrawlContext& ctx, const CrawlOptions& options);

/// Crawls every source concurrently, one thread per source; the shared gate
/// serializes requests per host. Results follow `sources` order. A source
/// whose robots/sitemap discovery fails contributes an empty result with the
/// failure recorded in its errors.
std::vector<CrawlResult> crawl_sources(const std::vector<NewsSource>& sources, CrawlContext& ctx,
                                       const CrawlOptions& options);

}  // namespace newsbias
