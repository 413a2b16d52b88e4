#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "newsbias/bias.hpp"
#include "newsbias/error.hpp"
#include "newsbias/html_extract.hpp"
#include "test_support.hpp"

using namespace newsbias;

namespace {

std::string site_file(const std::string& rel) {
  std::ifstream in(nbtest::sites_dir() / rel, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorCode code_of(const std::string& html) {
  try {
    extract_article(html, "http://x.test/");
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Usage;
}

}  // namespace

TEST(Extract, MinimalPage) {
  const auto a = extract_article("<html><head><title>T</title></head><body><p>One sentence here.</p></body></html>",
                                 "http://x.test/a");
  EXPECT_EQ(a.title, "T");
  EXPECT_EQ(a.body, "One sentence here.");
  EXPECT_TRUE(a.tags.empty());
}

TEST(Extract, ScriptOnlyPageHasNoText) {
  EXPECT_EQ(code_of("<html><body><script>var s = 'Not an article.';</script></body></html>"),
            ErrorCode::NoExtractableText);
  EXPECT_EQ(code_of(site_file("www.example-news.com/script-only.html")), ErrorCode::NoExtractableText);
  EXPECT_EQ(code_of(""), ErrorCode::NoExtractableText);
}

TEST(Extract, ParagraphsNavAndKeywords) {
  const std::string html = R"(<html><head><title>Story</title>
<meta name="keywords" content="Trump, Israel">
</head><body>
<nav><p>Home. World. Politics.</p></nav>
<p>First paragraph sentence.</p>
<p>Second paragraph sentence.</p>
<p>Third paragraph sentence.</p>
</body></html>)";
  const auto a = extract_article(html, "http://x.test/story");
  EXPECT_EQ(a.body, "First paragraph sentence.\nSecond paragraph sentence.\nThird paragraph sentence.");
  EXPECT_EQ(a.tags, (std::vector<std::string>{"trump", "israel"}));
}

TEST(Extract, BoilerplateContainersAreSkipped) {
  const std::string html = R"(<body>
<header><p>Header text.</p></header>
<div class="share-tools"><p>Share this.</p></div>
<div id="newsletter-signup"><p>Subscribe now.</p></div>
<div role="complementary"><p>Side text.</p></div>
<aside><p>Related story.</p></aside>
<p>Kept sentence.</p>
<footer><p>Footer text.</p></footer>
</body>)";
  EXPECT_EQ(extract_article(html, "http://x.test/").body, "Kept sentence.");
}

TEST(Extract, ArticleParagraphsWinAndLinkFarmsDrop) {
  const std::string html = R"(<body>
<p>Outside paragraph.</p>
<article><p>Inside paragraph.</p><p><a href="/a">A very long link text</a> x.</p></article>
</body>)";
  EXPECT_EQ(extract_article(html, "http://x.test/").body, "Inside paragraph.");
}

TEST(Extract, DecodesEntitiesAndFallsBackToOgTitle) {
  const std::string html = R"(<head><meta property="og:title" content="Caf&eacute; &amp; Bar"></head>
<body><p>Prices rose 5&#37; &mdash; officials said &quot;fine&quot;.</p></body>)";
  const auto a = extract_article(html, "http://x.test/");
  EXPECT_EQ(a.title, "Café & Bar");
  EXPECT_EQ(a.body, "Prices rose 5% \xe2\x80\x94 officials said \"fine\".");
}

TEST(Extract, FixtureArticleDropsChrome) {
  const auto a = extract_article(site_file("www.example-news.com/politics/biased-four.html"),
                                 "http://www.example-news.com/politics/biased-four.html");
  EXPECT_EQ(a.title, "Four sentences on Jerusalem");
  EXPECT_EQ(split_sentences(a.body).size(), 4u);
  EXPECT_EQ(a.body.find("Share"), std::string::npos);
  EXPECT_EQ(a.body.find("Copyright"), std::string::npos);
  EXPECT_EQ(a.body.find("Related"), std::string::npos);
}

TEST(Extract, PaywalledFixtureHasNoArticle) {
  EXPECT_EQ(code_of(site_file("www.example-news.com/paywalled.html")), ErrorCode::NoExtractableText);
}

TEST(Extract, TagsAreDeduplicatedAcrossMetas) {
  const std::string html = R"(<head><meta name="news_keywords" content=" Gaza ,gaza, ,Peace">
<meta property="article:tag" content="PEACE"></head><body><p>Text here.</p></body>)";
  EXPECT_EQ(extract_article(html, "http://x.test/").tags, (std::vector<std::string>{"gaza", "peace"}));
}
