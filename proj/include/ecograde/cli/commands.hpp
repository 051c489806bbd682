#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecograde/core/serialize.hpp"

namespace ecograde {

enum ExitCode : int {
    kExitOk = 0,
    kExitRuntime = 1,
    kExitConfig = 2,
};

/// Provenance record written as manifest.json into every output directory.
struct RunManifest {
    std::string command;
    std::optional<std::string> config_path;
    std::vector<std::pair<std::string, std::string>> inputs;   // path, content hash
    std::vector<std::uint64_t> seeds;
    Json parameters = Json::object();
    std::string tool_version = ECOGRADE_VERSION;
    std::string started_at;
    std::string finished_at;
    std::vector<std::pair<std::string, std::string>> outputs;  // relative path, content hash
};

Json to_json(const RunManifest& manifest);

/// Content hash of a file, or of every regular file below a directory
/// (relative paths and bytes, in sorted order).
std::string hash_path(const std::filesystem::path& path);

/// Hashes every file under `dir` into manifest.outputs, then writes dir/manifest.json.
void write_manifest(const std::filesystem::path& dir, RunManifest manifest);

/// Entry point shared by the executable and the tests. args[0] is the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace ecograde
