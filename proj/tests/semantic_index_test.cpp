#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "newsbias/error.hpp"
#include "newsbias/semantic_index.hpp"
#include "newsbias/url.hpp"
#include "oracles.hpp"

using namespace newsbias;

TEST(Cosine, Examples) {
  const std::vector<double> a{1, 0}, b{0, 1}, c{1, 1};
  EXPECT_DOUBLE_EQ(cosine_similarity(a, a), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, b), 0.0);
  EXPECT_NEAR(cosine_similarity(a, c), 0.7071067811865476, 1e-15);
  const std::vector<double> zero{0, 0};
  EXPECT_EQ(cosine_similarity(zero, a), 0.0);
  const std::vector<double> three{1, 2, 3};
  EXPECT_THROW(cosine_similarity(a, three), Error);
}

TEST(Cosine, SymmetryScaleInvarianceAndBounds) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const auto p = nbtest::random_distribution(rng, 20, false);
    const auto q = nbtest::random_distribution(rng, 20, false);
    const double s = cosine_similarity(p, q);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_NEAR(s, cosine_similarity(q, p), 1e-12);
    auto scaled = p;
    for (auto& x : scaled) x *= scale(rng);
    const double a = scale(rng);
    auto uniform_scaled = p;
    for (auto& x : uniform_scaled) x *= a;
    EXPECT_NEAR(s, cosine_similarity(uniform_scaled, q), 1e-12);
    EXPECT_NEAR(s, nbtest::reference_cosine(p, q), 1e-12);
    EXPECT_NEAR(cosine_similarity(p, p), 1.0, 1e-12);
  }
}

TEST(Query, MatchesExhaustiveScanIncludingTies) {
  std::mt19937_64 rng(77);
  const int k = 8;
  const auto index = nbtest::random_index(rng, 1000, 5, k);
  for (int qi = 0; qi < 100; ++qi) {
    const auto query = qi % 2 ? index.entries[static_cast<std::size_t>(qi * 9)].theta : nbtest::random_distribution(rng, k, true);
    const auto best = nbtest::exhaustive_best(index, query);
    const auto got = query_similar(index, query);
    ASSERT_EQ(got.size(), best.size());
    for (const auto& [src, m] : best) {
      ASSERT_TRUE(got.count(src));
      EXPECT_EQ(got.at(src).article_id, index.entries[m.entry].article_id) << "query " << qi << " source " << src;
      EXPECT_NEAR(got.at(src).similarity, m.similarity, 1e-12);
    }
  }
}

TEST(Query, ExcludesQueryUrlAndAppliesThreshold) {
  SemanticIndex index;
  index.entries.push_back({"a", "s1", "http://x.test/a", std::nullopt, {1, 0}});
  index.entries.push_back({"b", "s1", "http://x.test/b", std::nullopt, {0.6, 0.4}});
  index.entries.push_back({"c", "s2", "http://y.test/c", std::nullopt, {0, 1}});
  const std::vector<double> q{1, 0};
  auto got = query_similar(index, q, std::string("HTTP://X.test/a?utm_source=feed#top"));
  EXPECT_EQ(got.at("s1").article_id, "b");
  got = query_similar(index, q, std::nullopt, 0.5);
  EXPECT_EQ(got.size(), 1u);
  EXPECT_EQ(got.at("s1").article_id, "a");
}

TEST(Query, UndatedLosesTieToDated) {
  SemanticIndex index;
  index.entries.push_back({"a", "s", "http://x.test/a", std::nullopt, {1, 0}});
  index.entries.push_back({"z", "s", "http://x.test/z", parse_w3c_datetime("2018-01-01"), {1, 0}});
  index.entries.push_back({"m", "s", "http://x.test/m", parse_w3c_datetime("2018-01-01"), {2, 0}});
  const std::vector<double> q{1, 0};
  EXPECT_EQ(query_similar(index, q).at("s").article_id, "m");
}
