// Serves a fixture tree (<root>/<host>/<path>) over HTTP, dispatching on the
// Host header. Use with `newsbias --resolve host=127.0.0.1:PORT ...`.
#include <CLI11.hpp>

#include <iostream>

#include "newsbias/error.hpp"
#include "newsbias/fixture_server.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fixture corpus HTTP server"};
  std::string root = "fixtures/sites";
  std::string host = "127.0.0.1";
  int port = 8099;
  app.add_option("--root", root, "Fixture tree root");
  app.add_option("--host", host, "Bind address");
  app.add_option("--port", port, "Port");
  CLI11_PARSE(app, argc, argv);
  try {
    newsbias::FixtureServer server(root);
    std::cout << "serving " << root << " on " << host << ":" << port << std::endl;
    server.run(host, port);
  } catch (const newsbias::Error& e) {
    std::cerr << "error: " << newsbias::to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
}
