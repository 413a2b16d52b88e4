#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "newsbias/time.hpp"

namespace newsbias {

struct FetchResponse {
  int status = 0;
  std::string body;
};

/// Fetches a URL. Transport failures throw Error{NetworkError}; HTTP error
/// statuses are returned, not thrown.
class Fetcher {
 public:
  virtual ~Fetcher() = default;
  virtual FetchResponse fetch(const std::string& url) = 0;
};

struct HttpFetcherOptions {
  std::string user_agent = "newsbias/1.0 (+bias-aware news recommender)";
  std::chrono::seconds timeout{20};
  /// host -> "address:port"; the request goes to the address but keeps the
  /// original Host header (like curl --resolve).
  std::map<std::string, std::string> host_overrides;
};

class HttpFetcher final : public Fetcher {
 public:
  explicit HttpFetcher(HttpFetcherOptions options = {});
  FetchResponse fetch(const std::string& url) override;

 private:
  HttpFetcherOptions options_;
};

/// Serves `http(s)://host/path` from `root/host/path` without any network.
/// A path ending in '/' maps to index.html; queries are ignored.
class FixtureFetcher final : public Fetcher {
 public:
  explicit FixtureFetcher(std::filesystem::path root) : root_(std::move(root)) {}
  FetchResponse fetch(const std::string& url) override;

 private:
  std::filesystem::path root_;
};

/// Maps a URL onto its fixture file path under `root`, or an empty path when
/// the URL cannot be represented there.
std::filesystem::path fixture_path(const std::filesystem::path& root, const std::string& url);

/// Per-host request spacing. Two requests to the same host are at least
/// `delay` apart on the supplied clock; different hosts never wait on each
/// other.
class PolitenessGate {
 public:
  struct LogEntry {
    std::string host;
    std::string url;
    Timestamp at;
  };

  explicit PolitenessGate(Clock& clock) : clock_(clock) {}

  /// Blocks until the host may be contacted again, then records the request.
  Timestamp acquire(const std::string& url, std::chrono::milliseconds delay);
  std::vector<LogEntry> log() const;

 private:
  struct HostState {
    std::mutex mu;
    std::optional<Timestamp> last;
  };
  HostState& host_state(const std::string& host);

  Clock& clock_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::unique_ptr<HostState>> hosts_;
  std::vector<LogEntry> log_;
};

/// `host[:port]` used as the politeness key.
std::string host_key(const std::string& url);

}  // namespace newsbias
