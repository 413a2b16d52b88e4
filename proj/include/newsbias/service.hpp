#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "newsbias/fetch.hpp"
#include "newsbias/state.hpp"
#include "newsbias/time.hpp"

namespace httplib {
class Server;
}

namespace newsbias {

struct Recommendation {
  std::string url;
  std::string source_id;
  std::string source_name;
  double leaning = 0.0;
  double bias_score = 0.0;
  double similarity = 0.0;
  std::string title;
};

struct BiasReport {
  std::string query_url;
  double bias_score = 0.0;
  std::size_t sentences_total = 0;
  std::size_t sentences_biased = 0;
  std::vector<Recommendation> recommendations;  // at most one per source, by leaning
  Timestamp analyzed_at{};
  /// False when the page shares no vocabulary with the model; the report then
  /// carries only the bias score.
  bool topic_matched = true;
};

nlohmann::ordered_json to_json(const BiasReport& report);

struct ServiceOptions {
  std::chrono::milliseconds cache_ttl = std::chrono::minutes(15);
  double min_similarity = 0.0;
};

/// fetch -> extract -> score -> infer -> match over an immutable state
/// snapshot. Reports are cached by canonical URL for `cache_ttl`.
class Recommender {
 public:
  Recommender(std::shared_ptr<const ServiceState> state, Fetcher& fetcher, Clock& clock, ServiceOptions options = {});

  /// Throws Error{InvalidUrl}, Error{FetchFailed} or Error{NotAnArticle}.
  BiasReport analyze_url(const std::string& url);
  /// Cached JSON body of analyze_url; a replay within the TTL returns the
  /// identical string.
  std::string analyze_json(const std::string& url);

  std::shared_ptr<const ServiceState> state() const;
  /// Installs a new snapshot and clears the cache. Requests already running
  /// finish on the snapshot they started with.
  void replace_state(std::shared_ptr<const ServiceState> state);

 private:
  BiasReport analyze_with(const ServiceState& state, const std::string& canonical_url);

  mutable std::mutex state_mu_;
  std::shared_ptr<const ServiceState> state_;
  Fetcher& fetcher_;
  Clock& clock_;
  ServiceOptions options_;

  struct CacheEntry {
    Timestamp expires;
    std::string body;
  };
  std::mutex cache_mu_;
  std::unordered_map<std::string, CacheEntry> cache_;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct ServiceContext {
  StatePaths paths;
  Fetcher& fetcher;
  Clock& clock;
};

/// REST binding:
///   POST /v1/analyze        {"url"}                         -> BiasReport
///   GET  /v1/sources                                        -> source list
///   POST /v1/admin/crawl    {"source_id"?, "max_urls"}      -> crawl summary
///   POST /v1/admin/train    {"topics", "iterations", "seed"} -> training summary
///   GET  /v1/health                                         -> status
class RecommendService {
 public:
  RecommendService(ServiceContext context, std::shared_ptr<const ServiceState> state, ServiceOptions options = {});
  ~RecommendService();

  /// Transport-free dispatch; the HTTP server forwards every request here.
  HttpResponse handle(std::string_view method, std::string_view path, std::string_view body);

  /// Binds the listening socket; port 0 picks a free port. Returns the port.
  int bind(const std::string& host, int port);
  /// Serves until stop(); in-flight requests complete before it returns.
  void listen();
  void stop();

  Recommender& recommender() { return recommender_; }

 private:
  HttpResponse analyze(std::string_view body);
  HttpResponse sources() const;
  HttpResponse health() const;
  HttpResponse admin_crawl(std::string_view body);
  HttpResponse admin_train(std::string_view body);

  ServiceContext context_;
  Recommender recommender_;
  PolitenessGate gate_;
  std::mutex admin_mu_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace newsbias
