#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace ecograde {

/// Certificate efficiency rating of a single building element.
/// Declaration order is the quality order: VeryPoor < ... < VeryGood.
enum class EfficiencyBand : std::uint8_t {
    VeryPoor = 0,
    Poor = 1,
    Average = 2,
    Good = 3,
    VeryGood = 4,
};

inline constexpr std::size_t kBandCount = 5;

inline constexpr std::array<EfficiencyBand, kBandCount> kAllBands = {
    EfficiencyBand::VeryPoor, EfficiencyBand::Poor, EfficiencyBand::Average,
    EfficiencyBand::Good, EfficiencyBand::VeryGood};

/// very good -> 1.0, good -> 0.75, average -> 0.5, poor -> 0.25, very poor -> 0.
constexpr double band_to_score(EfficiencyBand band) noexcept {
    return 0.25 * static_cast<int>(band);
}

/// Nearest band for a mean score in [0,1]; halves round up.
EfficiencyBand band_from_score(double score) noexcept;

std::optional<EfficiencyBand> parse_band(std::string_view label) noexcept;
std::string_view to_string(EfficiencyBand band) noexcept;

/// The nine certificate elements that feed the efficiency factor.
enum class EpcAttribute : std::uint8_t {
    HotWater,
    Floor,
    Windows,
    Walls,
    SecondaryHeating,
    Roof,
    MainHeat,
    MainHeatControl,
    Lighting,
};

inline constexpr std::size_t kAttributeCount = 9;

inline constexpr std::array<EpcAttribute, kAttributeCount> kAllAttributes = {
    EpcAttribute::HotWater,         EpcAttribute::Floor,    EpcAttribute::Windows,
    EpcAttribute::Walls,            EpcAttribute::SecondaryHeating,
    EpcAttribute::Roof,             EpcAttribute::MainHeat,
    EpcAttribute::MainHeatControl,  EpcAttribute::Lighting};

/// snake_case key used in canonical JSON ("hot_water", "main_heat_control", ...).
std::string_view attribute_key(EpcAttribute attribute) noexcept;

/// Column name in the open-data export ("hot-water-energy-eff", ...).
std::string_view attribute_column(EpcAttribute attribute) noexcept;

std::optional<EpcAttribute> parse_attribute_key(std::string_view key) noexcept;

constexpr std::size_t index_of(EpcAttribute attribute) noexcept {
    return static_cast<std::size_t>(attribute);
}

using AttributeBands = std::array<std::optional<EfficiencyBand>, kAttributeCount>;
using AttributeScores = std::array<std::optional<double>, kAttributeCount>;

AttributeScores to_scores(const AttributeBands& bands) noexcept;

}  // namespace ecograde
