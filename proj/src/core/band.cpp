#include "ecograde/core/band.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace ecograde {
namespace {

constexpr std::array<std::string_view, kBandCount> kBandNames = {
    "very poor", "poor", "average", "good", "very good"};

constexpr std::array<std::string_view, kAttributeCount> kAttributeKeys = {
    "hot_water", "floor", "windows", "walls", "secondary_heating",
    "roof", "main_heat", "main_heat_control", "lighting"};

constexpr std::array<std::string_view, kAttributeCount> kAttributeColumns = {
    "hot-water-energy-eff", "floor-energy-eff",     "windows-energy-eff",
    "walls-energy-eff",     "sheating-energy-eff",  "roof-energy-eff",
    "mainheat-energy-eff",  "mainheatc-energy-eff", "lighting-energy-eff"};

// Lowercase; '_' and '-' become spaces; runs of spaces collapse; trimmed.
std::string fold(std::string_view text) {
    std::string out;
    bool pending_space = false;
    for (char c : text) {
        unsigned char u = static_cast<unsigned char>(c);
        if (c == '_' || c == '-' || std::isspace(u)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(u)));
    }
    return out;
}

}  // namespace

EfficiencyBand band_from_score(double score) noexcept {
    double steps = std::floor(std::clamp(score, 0.0, 1.0) * 4.0 + 0.5);
    return static_cast<EfficiencyBand>(static_cast<int>(std::min(steps, 4.0)));
}

std::optional<EfficiencyBand> parse_band(std::string_view label) noexcept {
    std::string folded = fold(label);
    for (std::size_t i = 0; i < kBandCount; ++i) {
        if (folded == kBandNames[i]) {
            return static_cast<EfficiencyBand>(i);
        }
    }
    return std::nullopt;
}

std::string_view to_string(EfficiencyBand band) noexcept {
    return kBandNames[static_cast<std::size_t>(band)];
}

std::string_view attribute_key(EpcAttribute attribute) noexcept {
    return kAttributeKeys[index_of(attribute)];
}

std::string_view attribute_column(EpcAttribute attribute) noexcept {
    return kAttributeColumns[index_of(attribute)];
}

std::optional<EpcAttribute> parse_attribute_key(std::string_view key) noexcept {
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        if (key == kAttributeKeys[i]) {
            return static_cast<EpcAttribute>(i);
        }
    }
    return std::nullopt;
}

AttributeScores to_scores(const AttributeBands& bands) noexcept {
    AttributeScores out{};
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        if (bands[i]) {
            out[i] = band_to_score(*bands[i]);
        }
    }
    return out;
}

}  // namespace ecograde
