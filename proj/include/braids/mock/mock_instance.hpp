#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "braids/mock/corpus.hpp"

namespace httplib {
class Server;
struct Request;
struct Response;
}  // namespace httplib

namespace braids::mock {

struct RecordedRequest {
  std::string method;
  std::string path;
  std::multimap<std::string, std::string> params;
  std::string authorization;
  int status = 0;
};

/// In-process fake Mastodon server over a frozen corpus. Responses are a
/// pure function of (corpus, request, per-endpoint call count); requests are
/// handled one at a time.
class MockInstance {
 public:
  explicit MockInstance(Corpus corpus);
  ~MockInstance();

  MockInstance(const MockInstance&) = delete;
  MockInstance& operator=(const MockInstance&) = delete;

  /// Binds 127.0.0.1:`port` (0 picks a free port) and serves on a background
  /// thread. Returns the bound port; throws std::runtime_error if the port
  /// is taken.
  int start(int port = 0);
  void stop();

  /// Blocks serving on the calling thread (for the CLI).
  void serve_forever(const std::string& host, int port);

  /// "http://127.0.0.1:<port>".
  std::string base_url() const;
  int port() const { return port_; }

  const Corpus& corpus() const { return corpus_; }

  std::vector<RecordedRequest> request_log() const;
  int call_count(const std::string& path) const;
  void clear_log();

 private:
  void install_routes();
  void record(const httplib::Request& req, const httplib::Response& res);
  bool inject_fault(const httplib::Request& req, httplib::Response& res);
  bool authorized(const httplib::Request& req) const;

  Corpus corpus_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;

  mutable std::mutex mu_;
  std::vector<RecordedRequest> log_;
  std::map<std::string, int> calls_;
  std::set<std::string> used_codes_;
  std::size_t next_code_ = 0;
  struct App {
    std::string client_secret;
    std::string redirect_uri;
  };
  std::map<std::string, App> apps_;
};

}  // namespace braids::mock
