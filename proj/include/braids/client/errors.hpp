#pragma once

#include <chrono>
#include <stdexcept>
#include <string>

namespace braids::client {

class ClientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller broke an operation's contract (bad limit, empty code, malformed
/// handle). Nothing was sent upstream.
class PreconditionError : public ClientError {
 public:
  using ClientError::ClientError;
};

/// Transport failure: DNS, refused connection, timeout, TLS.
class NetworkError : public ClientError {
 public:
  NetworkError(std::string instance, const std::string& detail);
  const std::string& instance() const { return instance_; }

 private:
  std::string instance_;
};

/// Upstream refused our credentials or grant (401/403, invalid_grant).
class AuthError : public ClientError {
 public:
  using ClientError::ClientError;
};

/// Server granted something other than what we asked for.
class ConfigurationError : public ClientError {
 public:
  using ClientError::ClientError;
};

class UpstreamError : public ClientError {
 public:
  UpstreamError(int status, const std::string& detail);
  int status() const { return status_; }

 private:
  int status_;
};

/// 429 that survived the retry budget.
class RateLimitError : public UpstreamError {
 public:
  RateLimitError(std::chrono::seconds retry_after, const std::string& detail);
  std::chrono::seconds retry_after() const { return retry_after_; }

 private:
  std::chrono::seconds retry_after_;
};

class ResolutionError : public ClientError {
 public:
  explicit ResolutionError(const std::string& handle);
};

}  // namespace braids::client
