#pragma once

#include <string>
#include <string_view>

namespace ecograde {

/// Uppercase, punctuation removed, whitespace collapsed to single spaces.
/// Apostrophes are dropped; other punctuation becomes a separator.
std::string normalize_address(std::string_view address);

/// Uppercase with exactly one space before the three-character inward code.
std::string normalize_postcode(std::string_view postcode);

/// District part of a postcode (everything before the inward code), e.g. "SW1A" for "SW1A 1AA".
std::string outward_code(std::string_view postcode);

/// Identity of a dwelling: normalized address plus normalized postcode.
std::string property_key(std::string_view address_key, std::string_view postcode);

}  // namespace ecograde
