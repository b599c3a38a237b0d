#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace braids::service {

/// Obfuscates OAuth tokens at rest (libsodium secretbox). The key is a hash
/// of the service secret, so the same BRAIDS_SECRET reopens an old store.
class TokenCipher {
 public:
  explicit TokenCipher(std::string_view secret);
  /// Key drawn at random: sealed values die with the process.
  static TokenCipher ephemeral();

  /// base64(nonce || ciphertext).
  std::string seal(std::string_view plaintext) const;
  /// nullopt if the value was sealed under another key or is corrupt.
  std::optional<std::string> open(std::string_view sealed) const;

 private:
  TokenCipher() = default;

  std::array<unsigned char, 32> key_{};
};

}  // namespace braids::service
