#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "newsbias/fixture_server.hpp"

#include "newsbias/error.hpp"
#include "newsbias/fetch.hpp"

namespace newsbias {

FixtureServer::FixtureServer(std::filesystem::path root)
    : root_(std::move(root)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

FixtureServer::~FixtureServer() { stop(); }

void FixtureServer::install_routes() {
  server_->Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
    std::string host = req.get_header_value("Host");
    FixtureFetcher files(root_);
    FetchResponse found;
    try {
      found = files.fetch("http://" + host + req.path);
    } catch (const Error&) {
      found = {400, "bad request"};
    }
    res.status = found.status;
    const bool xml = req.path.ends_with(".xml");
    const bool txt = req.path.ends_with(".txt");
    res.set_content(found.body, xml ? "application/xml" : txt ? "text/plain" : "text/html; charset=utf-8");
  });
}

int FixtureServer::start(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::Usage, "fixture server cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void FixtureServer::run(const std::string& host, int port) {
  if (!server_->listen(host, port))
    throw Error(ErrorCode::Usage, "fixture server cannot bind " + host + ":" + std::to_string(port));
}

void FixtureServer::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace newsbias
