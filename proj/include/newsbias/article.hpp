#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"
#include "newsbias/time.hpp"

namespace newsbias {

struct Article {
  std::string id;  // sha256 hex of the canonical url
  std::string url;
  std::string source_id;
  std::string title;
  std::string body;
  std::vector<std::string> tags;
  std::optional<Timestamp> published_at;
  Timestamp fetched_at{};
  std::optional<double> bias_score;
  std::optional<std::vector<double>> topic_distribution;
};

/// Content address of a canonical URL.
std::string article_id(std::string_view canonical_url);

nlohmann::ordered_json to_json(const Article& article);
/// Throws Error{CorruptState} when a field is missing, mistyped, or breaks an
/// Article invariant.
Article article_from_json(const nlohmann::json& j);

/// Reads an append-only NDJSON store. A missing file is an empty store.
std::vector<Article> read_store(const std::string& path);

/// Appends records to an NDJSON store from any thread. Writes are funnelled
/// through one background writer so lines never interleave.
class StoreWriter {
 public:
  explicit StoreWriter(const std::string& path);
  ~StoreWriter();
  StoreWriter(const StoreWriter&) = delete;
  StoreWriter& operator=(const StoreWriter&) = delete;

  void append(const Article& article);
  /// Blocks until every queued record is on disk.
  void flush();

 private:
  void run();

  std::ofstream out_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable drained_;
  std::deque<std::string> queue_;
  bool writing_ = false;
  bool stop_ = false;
  std::thread worker_;
};

}  // namespace newsbias
