#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace brickforge {

// Lowercase hex digests.
std::string sha256_hex(std::string_view data);
// std::runtime_error naming the path on read failure.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace brickforge
