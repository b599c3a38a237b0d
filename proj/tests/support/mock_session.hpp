#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include "braids/client/mastodon_client.hpp"
#include "braids/mock/mock_instance.hpp"

namespace braids::testing {

inline constexpr const char* kRedirectUri = "http://127.0.0.1:9/callback";

inline mock::Corpus load_fixture() {
  return mock::Corpus::load(std::string(BRAIDS_FIXTURE_DIR) + "/corpus.json");
}

/// A running mock instance plus a client that has been through the OAuth
/// dance against it. Sleeps requested by the client are recorded, not slept.
struct MockSession {
  explicit MockSession(mock::Corpus corpus, bool authenticate = true)
      : instance(std::make_unique<mock::MockInstance>(std::move(corpus))) {
    instance->start();
    options.sleep = [this](std::chrono::milliseconds d) { sleeps.push_back(d); };
    auto app = client::register_app(instance->base_url(), kRedirectUri, options);
    client = std::make_unique<client::MastodonClient>(
        client::InstanceCredentials{instance->base_url(), app.client_id, app.client_secret,
                                    kRedirectUri, std::nullopt},
        options);
    if (authenticate) client->exchange_code(instance->corpus().oauth.valid_codes.front());
    instance->clear_log();
  }
  MockSession(const MockSession&) = delete;
  MockSession& operator=(const MockSession&) = delete;

  std::unique_ptr<mock::MockInstance> instance;
  client::ClientOptions options;
  std::vector<std::chrono::milliseconds> sleeps;
  std::unique_ptr<client::MastodonClient> client;
};

}  // namespace braids::testing
