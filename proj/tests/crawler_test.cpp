#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <map>
#include <set>

#include "newsbias/bias.hpp"
#include "newsbias/crawler.hpp"
#include "newsbias/error.hpp"
#include "newsbias/fetch.hpp"
#include "newsbias/fixture_server.hpp"
#include "test_support.hpp"

using namespace newsbias;
using namespace std::chrono_literals;

namespace {

class CountingFetcher final : public Fetcher {
 public:
  explicit CountingFetcher(Fetcher& inner) : inner_(inner) {}
  FetchResponse fetch(const std::string& url) override {
    {
      std::lock_guard lock(mu_);
      urls.push_back(url);
    }
    return inner_.fetch(url);
  }
  std::vector<std::string> urls;

 private:
  Fetcher& inner_;
  std::mutex mu_;
};

struct Harness {
  explicit Harness(std::filesystem::path root) : fixtures(std::move(root)), fetcher(fixtures), gate(clock) {}
  CrawlContext ctx() { return {fetcher, gate, clock}; }

  FixtureFetcher fixtures;
  CountingFetcher fetcher;
  ManualClock clock{nbtest::fixture_now()};
  PolitenessGate gate;
};

NewsSource source_for(const std::string& host, std::int64_t delay_ms = 0) {
  NewsSource s;
  s.id = host;
  s.name = host;
  s.home_url = "http://" + host + "/";
  s.crawl_delay_ms = delay_ms;
  return s;
}

const NewsSource& fixture_source(const std::string& id) {
  static const auto sources = nbtest::fixture_sources();
  return *std::find_if(sources.begin(), sources.end(), [&](const NewsSource& s) { return s.id == id; });
}

std::string page(const std::string& text) { return "<html><body><p>" + text + "</p></body></html>"; }

}  // namespace

TEST(Crawler, NewestThreeOfNytimes) {
  Harness h(nbtest::sites_dir());
  auto ctx = h.ctx();
  CrawlOptions options;
  options.max_urls = 3;
  const auto r = crawl_source(fixture_source("nytimes"), ctx, options);
  ASSERT_EQ(r.articles.size(), 3u);
  EXPECT_EQ(r.articles[0].url, "http://www.nytimes.com/2018/01/09/opinion/pakistan-aid-engage.html?assetType=opinion");
  EXPECT_EQ(r.articles[1].url, "http://www.nytimes.com/2018/01/05/us/politics/nuclear-button-tweets.html");
  EXPECT_EQ(r.articles[2].url, "http://www.nytimes.com/2018/01/03/world/middleeast/israel-palestinians-jerusalem.html");
  for (const auto& a : r.articles) {
    EXPECT_EQ(a.source_id, "nytimes");
    EXPECT_EQ(a.id, article_id(a.url));
    EXPECT_TRUE(a.published_at);
    EXPECT_EQ(a.url.find("gwh="), std::string::npos);
    EXPECT_EQ(a.url.find("mtrref="), std::string::npos);
  }
  EXPECT_TRUE(r.errors.empty());
}

TEST(Crawler, FixtureCorpusIsFifteenDistinctArticles) {
  const auto articles = nbtest::crawl_fixture_articles(3);
  ASSERT_EQ(articles.size(), 15u);
  std::map<std::string, int> per_source;
  std::set<std::string> ids;
  for (const auto& a : articles) {
    ++per_source[a.source_id];
    ids.insert(a.id);
    ASSERT_TRUE(a.bias_score);
    EXPECT_GE(*a.bias_score, 0.0);
    EXPECT_LE(*a.bias_score, 1.0);
  }
  EXPECT_EQ(ids.size(), 15u);
  EXPECT_EQ(per_source.size(), 5u);
  for (const auto& [id, n] : per_source) EXPECT_EQ(n, 3) << id;
}

TEST(Crawler, KnownIdsAreNotRefetched) {
  Harness h(nbtest::sites_dir());
  auto ctx = h.ctx();
  CrawlOptions options;
  options.max_urls = 3;
  const auto first = crawl_source(fixture_source("bbc"), ctx, options);
  for (const auto& a : first.articles) options.known_ids.insert(a.id);
  const auto second = crawl_source(fixture_source("bbc"), ctx, options);
  EXPECT_TRUE(second.articles.empty());
  EXPECT_EQ(second.skipped_known, 3u);
}

TEST(Crawler, UndatedEntriesSortLastAndSinceKeepsThem) {
  std::vector<SitemapEntry> entries{{"http://a/1", std::nullopt},
                                    {"http://a/2", parse_w3c_datetime("2018-01-02")},
                                    {"http://a/3", parse_w3c_datetime("2018-01-05")},
                                    {"http://a/4", std::nullopt}};
  order_by_lastmod(entries);
  EXPECT_EQ(entries[0].loc, "http://a/3");
  EXPECT_EQ(entries[1].loc, "http://a/2");
  EXPECT_EQ(entries[2].loc, "http://a/1");
  EXPECT_EQ(entries[3].loc, "http://a/4");

  Harness h(nbtest::sites_dir());
  auto ctx = h.ctx();
  CrawlOptions options;
  options.since = parse_w3c_datetime("2018-01-04");
  const auto r = crawl_source(fixture_source("bbc"), ctx, options);
  std::set<std::string> urls;
  for (const auto& a : r.articles) urls.insert(a.url);
  EXPECT_EQ(urls, (std::set<std::string>{"http://www.bbc.com/news/world-asia-42574100",
                                         "http://www.bbc.com/news/world-asia-42566800",
                                         "http://www.bbc.com/news/undated-feature"}));
}

TEST(Crawler, PaywalledOnlySourceYieldsNoArticles) {
  nbtest::TempDir dir;
  nbtest::write_text(dir / "pay.test/robots.txt", "Sitemap: /sitemap.xml\n");
  nbtest::write_text(dir / "pay.test/sitemap.xml",
                     "<urlset><url><loc>http://pay.test/locked</loc><lastmod>2018-01-01</lastmod></url></urlset>");
  nbtest::write_text(dir / "pay.test/locked",
                     "<html><body><h1>Exclusive</h1><div class=\"paywall\"><p>Subscribe to read.</p></div></body></html>");
  Harness h(dir.path());
  auto ctx = h.ctx();
  const auto r = crawl_source(source_for("pay.test"), ctx, {});
  EXPECT_TRUE(r.articles.empty());
  EXPECT_EQ(r.skipped_extraction, 1u);
  EXPECT_EQ(r.candidates, 1u);
}

TEST(Crawler, IndexChildrenAreMergedWithoutDuplicates) {
  nbtest::TempDir dir;
  nbtest::write_text(dir / "m.test/robots.txt", "Sitemap: http://m.test/index.xml\nSitemap: http://m.test/b.xml\n");
  nbtest::write_text(dir / "m.test/index.xml",
                     "<sitemapindex><sitemap><loc>http://m.test/a.xml</loc></sitemap>"
                     "<sitemap><loc>http://m.test/b.xml</loc></sitemap></sitemapindex>");
  nbtest::write_text(dir / "m.test/a.xml",
                     "<urlset><url><loc>http://m.test/1</loc></url><url><loc>http://m.test/2?utm_source=x</loc></url></urlset>");
  nbtest::write_text(dir / "m.test/b.xml",
                     "<urlset><url><loc>http://m.test/2</loc></url><url><loc>http://m.test/3</loc></url></urlset>");
  Harness h(dir.path());
  auto ctx = h.ctx();
  std::vector<CrawlError> errors;
  const auto entries = collect_sitemap_entries({"http://m.test/index.xml", "http://m.test/b.xml"},
                                               source_for("m.test"), ctx, 2, errors);
  std::vector<std::string> locs;
  for (const auto& e : entries) locs.push_back(e.loc);
  EXPECT_EQ(locs, (std::vector<std::string>{"http://m.test/1", "http://m.test/2", "http://m.test/3"}));
  EXPECT_TRUE(errors.empty());
  EXPECT_EQ(std::count(h.fetcher.urls.begin(), h.fetcher.urls.end(), "http://m.test/b.xml"), 1);
}

TEST(Crawler, SitemapRecursionStopsAtDepthTwo) {
  nbtest::TempDir dir;
  nbtest::write_text(dir / "d.test/top.xml", "<sitemapindex><sitemap><loc>http://d.test/mid.xml</loc></sitemap>"
                                             "<sitemap><loc>http://d.test/leaf1.xml</loc></sitemap></sitemapindex>");
  nbtest::write_text(dir / "d.test/mid.xml",
                     "<sitemapindex><sitemap><loc>http://d.test/leaf2.xml</loc></sitemap></sitemapindex>");
  nbtest::write_text(dir / "d.test/leaf1.xml", "<urlset><url><loc>http://d.test/one</loc></url></urlset>");
  nbtest::write_text(dir / "d.test/leaf2.xml", "<urlset><url><loc>http://d.test/two</loc></url></urlset>");
  Harness h(dir.path());
  auto ctx = h.ctx();
  std::vector<CrawlError> errors;
  const auto entries = collect_sitemap_entries({"http://d.test/top.xml"}, source_for("d.test"), ctx, 2, errors);
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].loc, "http://d.test/one");
  EXPECT_EQ(std::count(h.fetcher.urls.begin(), h.fetcher.urls.end(), "http://d.test/leaf2.xml"), 0);

  h.fetcher.urls.clear();
  const auto deeper = collect_sitemap_entries({"http://d.test/top.xml"}, source_for("d.test"), ctx, 3, errors);
  EXPECT_EQ(deeper.size(), 2u);
}

TEST(Crawler, SelfReferencingIndexTerminates) {
  nbtest::TempDir dir;
  nbtest::write_text(dir / "loop.test/i.xml", "<sitemapindex><sitemap><loc>http://loop.test/i.xml</loc></sitemap></sitemapindex>");
  Harness h(dir.path());
  auto ctx = h.ctx();
  std::vector<CrawlError> errors;
  EXPECT_TRUE(collect_sitemap_entries({"http://loop.test/i.xml"}, source_for("loop.test"), ctx, 5, errors).empty());
  EXPECT_EQ(h.fetcher.urls.size(), 1u);
}

TEST(Crawler, RobotsUnavailableWithoutFallback) {
  nbtest::TempDir dir;
  nbtest::write_text(dir / "bare.test/index.html", page("Home page."));
  Harness h(dir.path());
  auto ctx = h.ctx();
  try {
    crawl_source(source_for("bare.test"), ctx, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RobotsUnavailable);
  }

  auto with_fallback = source_for("bare.test");
  nbtest::write_text(dir / "bare.test/sm.xml", "<urlset><url><loc>http://bare.test/a</loc></url></urlset>");
  nbtest::write_text(dir / "bare.test/a", page("An article sentence."));
  with_fallback.fallback_sitemap = "http://bare.test/sm.xml";
  EXPECT_EQ(crawl_source(with_fallback, ctx, {}).articles.size(), 1u);

  const auto results = crawl_sources({source_for("bare.test")}, ctx, {});
  ASSERT_EQ(results.size(), 1u);
  EXPECT_TRUE(results[0].articles.empty());
  EXPECT_EQ(results[0].errors.size(), 1u);
}

TEST(Crawler, BrokenPagesAreCountedNotFatal) {
  nbtest::TempDir dir;
  nbtest::write_text(dir / "e.test/robots.txt", "Sitemap: /s.xml\n");
  nbtest::write_text(dir / "e.test/s.xml",
                     "<urlset><url><loc>http://e.test/missing</loc></url><url><loc>http://e.test/ok</loc></url></urlset>");
  nbtest::write_text(dir / "e.test/ok", page("Fine sentence."));
  Harness h(dir.path());
  auto ctx = h.ctx();
  const auto r = crawl_source(source_for("e.test"), ctx, {});
  EXPECT_EQ(r.articles.size(), 1u);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].url, "http://e.test/missing");
}

TEST(Politeness, SameHostSpacedOtherHostsNot) {
  ManualClock clock(nbtest::fixture_now());
  PolitenessGate gate(clock);
  const auto t0 = clock.now();
  EXPECT_EQ(gate.acquire("http://a.test/1", 1000ms), t0);
  EXPECT_EQ(gate.acquire("http://a.test/2", 1000ms), t0 + 1000ms);
  EXPECT_EQ(gate.acquire("http://b.test/1", 1000ms), t0 + 1000ms);
  clock.advance(5000ms);
  EXPECT_EQ(gate.acquire("http://a.test/3", 1000ms), t0 + 6000ms);
  EXPECT_EQ(gate.acquire("http://a.test:8080/x", 1000ms), t0 + 6000ms);
  EXPECT_EQ(gate.log().size(), 5u);
}

TEST(Politeness, ConcurrentCrawlHonoursPerSourceDelay) {
  auto sources = nbtest::fixture_sources();
  for (auto& s : sources) s.crawl_delay_ms = 1500;
  Harness h(nbtest::sites_dir());
  auto ctx = h.ctx();
  CrawlOptions options;
  options.max_urls = 3;
  crawl_sources(sources, ctx, options);
  std::map<std::string, std::vector<Timestamp>> by_host;
  for (const auto& e : h.gate.log()) by_host[e.host].push_back(e.at);
  EXPECT_EQ(by_host.size(), 5u);
  for (auto& [host, times] : by_host) {
    EXPECT_GE(times.size(), 5u) << host;
    for (std::size_t i = 1; i < times.size(); ++i) EXPECT_GE(times[i] - times[i - 1], 1500ms) << host;
  }
}

TEST(FixtureServing, HttpFetcherThroughLocalServerMatchesFixtureFetcher) {
  FixtureServer server(nbtest::sites_dir());
  const int port = server.start("127.0.0.1", 0);
  HttpFetcherOptions http_options;
  http_options.timeout = std::chrono::seconds(5);
  http_options.host_overrides["www.bbc.com"] = "127.0.0.1:" + std::to_string(port);
  HttpFetcher http(http_options);
  SystemClock clock;
  PolitenessGate gate(clock);
  CrawlContext ctx{http, gate, clock};
  CrawlOptions options;
  options.max_urls = 3;
  const auto over_http = crawl_source(fixture_source("bbc"), ctx, options);

  Harness h(nbtest::sites_dir());
  auto offline_ctx = h.ctx();
  const auto offline = crawl_source(fixture_source("bbc"), offline_ctx, options);
  ASSERT_EQ(over_http.articles.size(), 3u);
  ASSERT_EQ(offline.articles.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(over_http.articles[i].id, offline.articles[i].id);
    EXPECT_EQ(over_http.articles[i].body, offline.articles[i].body);
  }
  EXPECT_EQ(http.fetch("http://www.bbc.com/no-such-page").status, 404);
  server.stop();
}

TEST(FixtureServing, PathMapping) {
  const std::filesystem::path root = "/r";
  EXPECT_EQ(fixture_path(root, "http://a.com/x/y.html?q=1"), root / "a.com/x/y.html");
  EXPECT_EQ(fixture_path(root, "http://a.com/dir/"), root / "a.com/dir/index.html");
  EXPECT_EQ(fixture_path(root, "http://a.com:8080/x"), root / "a.com_8080/x");
  EXPECT_EQ(fixture_path(root, "http://a.com/../etc/passwd"), std::filesystem::path());
  FixtureFetcher fetcher(nbtest::sites_dir());
  EXPECT_EQ(fetcher.fetch("http://nowhere.test/x").status, 404);
}

TEST(FixtureServing, UnreachableHostIsNetworkError) {
  HttpFetcherOptions o;
  o.timeout = std::chrono::seconds(2);
  o.host_overrides["dead.test"] = "127.0.0.1:1";
  HttpFetcher http(o);
  try {
    http.fetch("http://dead.test/");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NetworkError);
  }
}
