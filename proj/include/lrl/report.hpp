#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace lrl {

/// Writes `content` to `<path>.tmp` and renames it over `path`, so readers
/// never see a half-written file.
void atomic_write(const std::filesystem::path& path, std::string_view content);

/// 64-bit FNV-1a of the bytes, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace lrl
