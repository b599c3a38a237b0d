#include "braids/client/errors.hpp"

namespace braids::client {

NetworkError::NetworkError(std::string instance, const std::string& detail)
    : ClientError("network error talking to " + instance + ": " + detail),
      instance_(std::move(instance)) {}

UpstreamError::UpstreamError(int status, const std::string& detail)
    : ClientError("upstream returned HTTP " + std::to_string(status) + ": " + detail),
      status_(status) {}

RateLimitError::RateLimitError(std::chrono::seconds retry_after, const std::string& detail)
    : UpstreamError(429, detail), retry_after_(retry_after) {}

ResolutionError::ResolutionError(const std::string& handle)
    : ClientError("could not resolve account " + handle) {}

}  // namespace braids::client
