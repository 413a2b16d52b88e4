#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "newsbias/robots.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kBase = "https://example.com/robots.txt";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

std::vector<fs::path> cases() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(nbtest::fixture_dir() / "robots"))
    if (e.path().extension() == ".txt") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(RobotsConformance, SuiteHasEnoughCases) { EXPECT_GE(cases().size(), 10u); }

TEST(RobotsConformance, EveryFixtureMatchesExpected) {
  for (const auto& input : cases()) {
    auto expected_path = input;
    expected_path.replace_extension(".expected");
    ASSERT_TRUE(fs::exists(expected_path)) << expected_path;
    EXPECT_EQ(newsbias::parse_robots(slurp(input), kBase), lines_of(slurp(expected_path))) << input.filename();
  }
}

TEST(Robots, EmptyAndGarbageYieldNothing) {
  EXPECT_TRUE(newsbias::parse_robots("", kBase).empty());
  EXPECT_TRUE(newsbias::parse_robots("\x01\x02 binary junk\nSitemap:\n", kBase).empty());
}

TEST(Robots, OutputIsDuplicateFree) {
  const auto out = newsbias::parse_robots("Sitemap: /a.xml\nsitemap: https://example.com/a.xml\nSITEMAP: /b.xml\n", kBase);
  EXPECT_EQ(out, (std::vector<std::string>{"https://example.com/a.xml", "https://example.com/b.xml"}));
}
