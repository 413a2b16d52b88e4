#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace newsbias {

/// Local HTTP server for the fixture corpus. A request for `/path` with
/// `Host: example.com` is answered from `root/example.com/path`; missing files
/// are 404. Pair it with HttpFetcher host overrides to crawl real-looking URLs
/// offline.
class FixtureServer {
 public:
  explicit FixtureServer(std::filesystem::path root);
  ~FixtureServer();
  FixtureServer(const FixtureServer&) = delete;
  FixtureServer& operator=(const FixtureServer&) = delete;

  /// Binds (port 0 = any free port) and serves on a background thread.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  /// Serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();

 private:
  void install_routes();

  std::filesystem::path root_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace newsbias
