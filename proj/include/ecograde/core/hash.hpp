#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ecograde {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept;

/// 16 lowercase hex digits.
std::string hex64(std::uint64_t value);

std::string content_hash(std::string_view bytes);

}  // namespace ecograde
