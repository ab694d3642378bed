#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace anonnet {

// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

// Lowercase hex SHA-256 of a file's contents. Throws DataError if unreadable.
std::string file_sha256_hex(const std::filesystem::path& path);

// Raw HMAC-SHA256 tag (32 bytes).
std::string hmac_sha256(std::string_view key, std::string_view message);

std::string to_hex(std::string_view bytes);

}  // namespace anonnet
