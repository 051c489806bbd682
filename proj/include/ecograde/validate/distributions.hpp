#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ecograde/core/model.hpp"

namespace ecograde {

inline constexpr double kHistogramBinWidth = 0.25;
inline constexpr std::size_t kHistogramBins = 20;  // covers [0, 5]; 5.0 lands in the last bin

enum class GroupBy {
    City,
    BedType,
};

struct GroupDistribution {
    std::string group;
    std::array<int, kHistogramBins> bins{};
    std::vector<double> scores;  // raw overall scores, input order
};

std::size_t histogram_bin(double score) noexcept;

/// Histogram and raw score vector per group, groups in ascending order
/// (city name, or bed count with "unknown" last).
std::vector<GroupDistribution> export_distributions(std::span<const EcoGradeReport> reports, GroupBy group_by);

/// Writes histogram_<tag>_<group>.csv and raincloud_<tag>_<group>.csv into `dir`.
void write_distribution_files(const std::filesystem::path& dir, std::string_view tag,
                              std::span<const GroupDistribution> groups);

/// File-name-safe form of a group name ("Milton Keynes" -> "Milton_Keynes").
std::string file_token(std::string_view group);

}  // namespace ecograde
