#include "newsbias/crawler.hpp"

#include <algorithm>
#include <future>
#include <unordered_set>

#include "newsbias/error.hpp"
#include "newsbias/html_extract.hpp"
#include "newsbias/robots.hpp"
#include "newsbias/url.hpp"

namespace newsbias {

namespace {

FetchResponse polite_fetch(const std::string& url, const NewsSource& source, CrawlContext& ctx) {
  ctx.gate.acquire(url, std::chrono::milliseconds(source.crawl_delay_ms));
  return ctx.fetcher.fetch(url);
}

std::optional<std::string> canonical_or_empty(const std::string& url) {
  try {
    return canonicalize_url(url);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<SitemapEntry> collect_sitemap_entries(const std::vector<std::string>& sitemaps, const NewsSource& source,
                                                  CrawlContext& ctx, int max_depth, std::vector<CrawlError>& errors) {
  std::vector<SitemapEntry> entries;
  std::unordered_set<std::string> seen_urls;
  std::unordered_set<std::string> visited;

  auto visit = [&](auto&& self, const std::string& sitemap_url, int depth) -> void {
    if (depth > max_depth || !visited.insert(sitemap_url).second) return;
    FetchResponse response;
    try {
      response = polite_fetch(sitemap_url, source, ctx);
    } catch (const Error& e) {
      errors.push_back({sitemap_url, e.what()});
      return;
    }
    if (response.status >= 400) {
      errors.push_back({sitemap_url, "HTTP " + std::to_string(response.status)});
      return;
    }
    SitemapDocument doc;
    try {
      doc = parse_sitemap(response.body);
    } catch (const Error& e) {
      errors.push_back({sitemap_url, e.what()});
      return;
    }
    if (auto* set = std::get_if<UrlSet>(&doc)) {
      for (auto& entry : set->entries) {
        auto canonical = canonical_or_empty(entry.loc);
        if (!canonical || !seen_urls.insert(*canonical).second) continue;
        entry.loc = std::move(*canonical);
        entries.push_back(std::move(entry));
      }
    } else {
      for (const auto& child : std::get<SitemapIndex>(doc).sitemaps) self(self, child, depth + 1);
    }
  };

  for (const auto& sitemap : sitemaps) visit(visit, sitemap, 1);
  return entries;
}

void order_by_lastmod(std::vector<SitemapEntry>& entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const SitemapEntry& a, const SitemapEntry& b) {
    if (a.lastmod && b.lastmod) return *a.lastmod > *b.lastmod;
    return a.lastmod.has_value() && !b.lastmod.has_value();
  });
}

CrawlResult crawl_source(const NewsSource& source, CrawlContext& ctx, const CrawlOptions& options) {
  CrawlResult result;
  result.source_id = source.id;

  std::vector<std::string> sitemaps;
  const std::string robots_url = source.effective_robots_url();
  try {
    FetchResponse robots = polite_fetch(robots_url, source, ctx);
    if (robots.status < 400)
      sitemaps = parse_robots(robots.body, robots_url);
    else
      result.errors.push_back({robots_url, "HTTP " + std::to_string(robots.status)});
  } catch (const Error& e) {
    result.errors.push_back({robots_url, e.what()});
  }
  if (sitemaps.empty()) {
    if (!source.fallback_sitemap)
      throw Error(ErrorCode::RobotsUnavailable,
                  "source " + source.id + ": no sitemap from " + robots_url + " and no fallback_sitemap configured");
    sitemaps.push_back(*source.fallback_sitemap);
  }

  auto entries = collect_sitemap_entries(sitemaps, source, ctx, options.max_sitemap_depth, result.errors);
  order_by_lastmod(entries);
  if (entries.size() > options.max_urls) entries.resize(options.max_urls);
  if (options.since) {
    std::erase_if(entries, [&](const SitemapEntry& e) { return e.lastmod && *e.lastmod < *options.since; });
  }
  result.candidates = entries.size();

  for (const auto& entry : entries) {
    const std::string id = article_id(entry.loc);
    if (options.known_ids.count(id)) {
      ++result.skipped_known;
      continue;
    }
    FetchResponse page;
    try {
      page = polite_fetch(entry.loc, source, ctx);
    } catch (const Error& e) {
      result.errors.push_back({entry.loc, e.what()});
      continue;
    }
    if (page.status >= 400) {
      result.errors.push_back({entry.loc, "HTTP " + std::to_string(page.status)});
      continue;
    }
    ExtractedArticle extracted;
    try {
      extracted = extract_article(page.body, entry.loc);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoExtractableText) throw;
      ++result.skipped_extraction;
      continue;
    }
    Article article;
    article.id = id;
    article.url = entry.loc;
    article.source_id = source.id;
    article.title = std::move(extracted.title);
    article.body = std::move(extracted.body);
    article.tags = std::move(extracted.tags);
    article.published_at = entry.lastmod;
    article.fetched_at = ctx.clock.now();
    if (options.lexicon) article.bias_score = score_text(article.body, *options.lexicon).score;
    result.articles.push_back(std::move(article));
  }
  return result;
}

std::vector<CrawlResult> crawl_sources(const std::vector<NewsSource>& sources, CrawlContext& ctx,
                                       const CrawlOptions& options) {
  std::vector<std::future<CrawlResult>> pending;
  pending.reserve(sources.size());
  for (const auto& source : sources) {
    pending.push_back(std::async(std::launch::async, [&ctx, &options, &source] {
      try {
        return crawl_source(source, ctx, options);
      } catch (const Error& e) {
        CrawlResult failed;
        failed.source_id = source.id;
        failed.errors.push_back({source.effective_robots_url(), e.what()});
        return failed;
      }
    }));
  }
  std::vector<CrawlResult> out;
  out.reserve(pending.size());
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

}  // namespace newsbias
