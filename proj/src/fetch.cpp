#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "newsbias/fetch.hpp"

#include <fstream>
#include <sstream>

#include "newsbias/error.hpp"
#include "newsbias/url.hpp"

namespace newsbias {

HttpFetcher::HttpFetcher(HttpFetcherOptions options) : options_(std::move(options)) {}

FetchResponse HttpFetcher::fetch(const std::string& url_text) {
  auto url = Url::parse(url_text);
  if (!url || !url->is_http()) throw Error(ErrorCode::InvalidUrl, "cannot fetch " + url_text);

  std::string endpoint = url->origin();
  httplib::Headers headers{{"User-Agent", options_.user_agent}};
  if (auto it = options_.host_overrides.find(url->host); it != options_.host_overrides.end()) {
    endpoint = url->scheme + "://" + it->second;
    std::string host = url->host;
    if (url->port) host += ":" + std::to_string(*url->port);
    headers.emplace("Host", host);
  }

  httplib::Client client(endpoint);
  client.set_follow_location(true);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);
  client.enable_server_certificate_verification(true);
  auto result = client.Get(url->target(), headers);
  if (!result) throw Error(ErrorCode::NetworkError, url_text + ": " + httplib::to_string(result.error()));
  return {result->status, std::move(result->body)};
}

std::filesystem::path fixture_path(const std::filesystem::path& root, const std::string& url_text) {
  auto url = Url::parse(url_text);
  if (!url || !url->is_http()) return {};
  std::string host = url->host;
  if (url->port) host += "_" + std::to_string(*url->port);
  std::string path = url->path;
  if (path.empty() || path.back() == '/') path += "index.html";
  std::filesystem::path out = root / host;
  std::size_t start = 1;
  while (start <= path.size()) {
    std::size_t slash = path.find('/', start);
    if (slash == std::string::npos) slash = path.size();
    const std::string segment = path.substr(start, slash - start);
    if (segment == "..") return {};
    if (!segment.empty() && segment != ".") out /= segment;
    start = slash + 1;
  }
  return out;
}

FetchResponse FixtureFetcher::fetch(const std::string& url) {
  const auto path = fixture_path(root_, url);
  if (path.empty()) throw Error(ErrorCode::InvalidUrl, "cannot fetch " + url);
  std::ifstream in(path, std::ios::binary);
  if (!in || std::filesystem::is_directory(path)) return {404, "not found"};
  std::ostringstream body;
  body << in.rdbuf();
  return {200, body.str()};
}

std::string host_key(const std::string& url_text) {
  auto url = Url::parse(url_text);
  if (!url) return url_text;
  return url->host + ":" + std::to_string(url->effective_port());
}

PolitenessGate::HostState& PolitenessGate::host_state(const std::string& host) {
  std::lock_guard lock(mu_);
  auto& slot = hosts_[host];
  if (!slot) slot = std::make_unique<HostState>();
  return *slot;
}

Timestamp PolitenessGate::acquire(const std::string& url, std::chrono::milliseconds delay) {
  const std::string host = host_key(url);
  HostState& state = host_state(host);
  std::lock_guard host_lock(state.mu);
  if (state.last) {
    const Timestamp ready = *state.last + delay;
    if (clock_.now() < ready) clock_.sleep_until(ready);
  }
  const Timestamp at = clock_.now();
  state.last = at;
  std::lock_guard lock(mu_);
  log_.push_back({host, url, at});
  return at;
}

std::vector<PolitenessGate::LogEntry> PolitenessGate::log() const {
  std::lock_guard lock(mu_);
  return log_;
}

}  // namespace newsbias
