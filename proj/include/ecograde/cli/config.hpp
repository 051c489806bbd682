#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "ecograde/core/serialize.hpp"
#include "ecograde/ingest/bedrooms.hpp"
#include "ecograde/ingest/epc_ingest.hpp"
#include "ecograde/score/factors.hpp"

namespace ecograde {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::optional<std::filesystem::path> data_dir;
};

/// Contents of the shared configuration file. Every section is optional
/// and falls back to the built-in defaults.
struct AppConfig {
    int version = 1;
    std::optional<std::filesystem::path> source;  // file the config was read from
    ScoreCalibration calibration{};
    ConversionFactors conversion{};
    CleaningRules cleaning{};
    int min_similar = 3;
    BedroomLookupTable bedrooms = BedroomLookupTable::defaults();
    ServiceConfig service{};
};

inline constexpr int kConfigVersion = 1;

/// Throws Error(Config) for unreadable, malformed or invalid files.
AppConfig load_config(const std::filesystem::path& path);

/// Parses a JSON document, reporting failures as Error(Config) naming `what`.
Json parse_config_json(const std::string& text, const std::string& what);

/// Applies ECOGRADE_PORT and ECOGRADE_DATA_DIR when set.
void apply_env_overrides(ServiceConfig& service);

Json to_json(const AppConfig& config);

}  // namespace ecograde
