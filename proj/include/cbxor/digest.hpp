#pragma once

#include <cstdint>
#include <span>
#include <string>

#include <openssl/evp.h>

#include "cbxor/error.hpp"

namespace cbxor {

inline constexpr const char* kDigestAlgorithm = "sha256";

/// Lowercase hex SHA-256 of `bytes`.
inline std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::io, "SHA-256 computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0x0F]);
  }
  return out;
}

}  // namespace cbxor
