#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "newsbias/article.hpp"
#include "newsbias/fetch.hpp"
#include "newsbias/pipeline.hpp"
#include "newsbias/source.hpp"
#include "newsbias/state.hpp"
#include "newsbias/time.hpp"

namespace nbtest {

std::filesystem::path fixture_dir();
std::filesystem::path sites_dir();
std::filesystem::path schema_dir();
std::filesystem::path cli_path();

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

/// 2018-01-10T00:00:00Z, just after the newest fixture article.
newsbias::Timestamp fixture_now();

/// Validates `doc` against the subset of JSON Schema the published schemas
/// use. Returns one message per violation; empty means valid.
std::vector<std::string> schema_errors(const nlohmann::json& schema, const nlohmann::json& doc);
nlohmann::json load_schema(const std::string& name);

/// The 5 fixture sources crawled at 3 URLs each through FixtureFetcher,
/// scored with the built-in lexicon.
std::vector<newsbias::NewsSource> fixture_sources();
std::vector<newsbias::Article> crawl_fixture_articles(std::size_t max_per_source = 3);

/// Model and index over the fixture corpus, seed 42.
newsbias::IndexBuild build_fixture_index(const std::vector<newsbias::Article>& articles, int iterations = 200);

/// Service state assembled in memory from the fixture corpus.
std::shared_ptr<newsbias::ServiceState> fixture_state(int iterations = 200);

std::vector<std::string> fixture_queries();

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

/// Runs the CLI entry point in-process.
CliRun run_cli(const std::vector<std::string>& args);

}  // namespace nbtest
