#include <iostream>

#include <CLI11.hpp>

#include "braids/mock/mock_instance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Deterministic fake Mastodon instance serving a frozen corpus"};
  std::string corpus_path;
  std::string host = "127.0.0.1";
  int port = 8081;
  app.add_option("--corpus", corpus_path, "Corpus fixture (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--port", port, "Port to listen on")->check(CLI::Range(1, 65535));
  app.add_option("--host", host, "Address to bind");
  CLI11_PARSE(app, argc, argv);

  try {
    braids::mock::MockInstance instance(braids::mock::Corpus::load(corpus_path));
    std::cerr << "mock instance for " << instance.corpus().domain << " with "
              << instance.corpus().posts.size() << " posts on http://" << host << ":" << port
              << "\n";
    instance.serve_forever(host, port);
  } catch (const std::exception& e) {
    std::cerr << "mock-instance: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
