#include "ecograde/core/hash.hpp"

#include <cstdio>

namespace ecograde {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) noexcept {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string content_hash(std::string_view bytes) {
    return hex64(fnv1a64(bytes));
}

}  // namespace ecograde
