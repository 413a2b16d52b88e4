#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "newsbias/error.hpp"
#include "newsbias/sitemap.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace newsbias;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<fs::path> cases() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(nbtest::fixture_dir() / "sitemaps"))
    if (e.path().extension() == ".xml") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

json actual_of(const std::string& xml) {
  try {
    const auto doc = parse_sitemap(xml);
    if (const auto* set = std::get_if<UrlSet>(&doc)) {
      json entries = json::array();
      for (const auto& e : set->entries)
        entries.push_back({{"loc", e.loc}, {"lastmod", e.lastmod ? json(format_timestamp(*e.lastmod)) : json(nullptr)}});
      return {{"kind", "urlset"}, {"entries", entries}};
    }
    return {{"kind", "index"}, {"sitemaps", std::get<SitemapIndex>(doc).sitemaps}};
  } catch (const Error& e) {
    return {{"error", to_string(e.code())}};
  }
}

}  // namespace

TEST(SitemapConformance, SuiteHasEnoughCasesIncludingMalformed) {
  std::size_t malformed = 0;
  for (const auto& c : cases()) {
    auto expected = c;
    expected.replace_extension(".expected.json");
    if (json::parse(slurp(expected)).contains("error")) ++malformed;
  }
  EXPECT_GE(cases().size(), 10u);
  EXPECT_GE(malformed, 3u);
}

TEST(SitemapConformance, EveryFixtureMatchesExpected) {
  for (const auto& input : cases()) {
    auto expected_path = input;
    expected_path.replace_extension(".expected.json");
    ASSERT_TRUE(fs::exists(expected_path)) << expected_path;
    EXPECT_EQ(actual_of(slurp(input)), json::parse(slurp(expected_path))) << input.filename();
  }
}

TEST(Sitemap, MultipleRootsAreMalformed) {
  EXPECT_EQ(actual_of("<urlset></urlset><urlset></urlset>"), json({{"error", "MalformedXml"}}));
}

TEST(Sitemap, SerializeParseRoundTripProperty) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> count(0, 20), coin(0, 1), piece(0, 4);
  std::uniform_int_distribution<long long> ms(0, 4'000'000'000'000LL);
  const char* pieces[] = {"a", "b&c", "d<e>", "f'g", "h\"i"};
  for (int trial = 0; trial < 200; ++trial) {
    UrlSet set;
    for (int i = count(rng); i > 0; --i) {
      std::string loc = "https://h" + std::to_string(trial) + ".example/p" + std::to_string(i) + "?q=" + pieces[piece(rng)];
      std::optional<Timestamp> lastmod;
      if (coin(rng)) lastmod = Timestamp{std::chrono::milliseconds(ms(rng))};
      set.entries.push_back({loc, lastmod});
    }
    const auto parsed = parse_sitemap(serialize_sitemap(set));
    ASSERT_TRUE(std::holds_alternative<UrlSet>(parsed));
    EXPECT_EQ(std::get<UrlSet>(parsed).entries, set.entries);

    SitemapIndex index;
    for (const auto& e : set.entries) index.sitemaps.push_back(e.loc);
    const auto parsed_index = parse_sitemap(serialize_sitemap(index));
    ASSERT_TRUE(std::holds_alternative<SitemapIndex>(parsed_index));
    EXPECT_EQ(std::get<SitemapIndex>(parsed_index).sitemaps, index.sitemaps);
  }
}
