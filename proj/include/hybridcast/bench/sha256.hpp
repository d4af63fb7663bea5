#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace hybridcast::bench {

/// SHA-256 digest as a lowercase hex string.
std::string sha256_hex(std::span<const unsigned char> data);
std::string sha256_hex(const std::string& data);

/// Digest of a file's bytes. Throws IoError when unreadable.
std::string sha256_file(const std::string& path);

}  // namespace hybridcast::bench
