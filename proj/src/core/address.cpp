#include "ecograde/core/address.hpp"

#include <cctype>

namespace ecograde {

std::string normalize_address(std::string_view address) {
    std::string out;
    bool pending_space = false;
    for (char c : address) {
        unsigned char u = static_cast<unsigned char>(c);
        if (c == '\'' || c == '`') {
            continue;
        }
        if (std::isalnum(u) || u >= 0x80) {
            if (pending_space && !out.empty()) {
                out.push_back(' ');
            }
            pending_space = false;
            out.push_back(static_cast<char>(std::toupper(u)));
        } else {
            pending_space = true;
        }
    }
    return out;
}

std::string normalize_postcode(std::string_view postcode) {
    std::string compact;
    for (char c : postcode) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            compact.push_back(static_cast<char>(std::toupper(u)));
        }
    }
    if (compact.size() < 5) {
        return compact;
    }
    compact.insert(compact.size() - 3, 1, ' ');
    return compact;
}

std::string outward_code(std::string_view postcode) {
    std::string normalized = normalize_postcode(postcode);
    auto space = normalized.find(' ');
    return space == std::string::npos ? normalized : normalized.substr(0, space);
}

std::string property_key(std::string_view address_key, std::string_view postcode) {
    std::string key(address_key);
    key.push_back('|');
    key.append(postcode);
    return key;
}

}  // namespace ecograde
