#include "ecograde/cli/config.hpp"

#include <charconv>
#include <cstdlib>
#include <set>

#include "ecograde/core/error.hpp"

namespace ecograde {

Json parse_config_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        fail(ErrorCode::Config, what + ": " + e.what());
    }
}

namespace {

template <typename T>
T section(const Json& root, const char* key, const T& fallback, const std::string& what) {
    auto it = root.find(key);
    if (it == root.end()) return fallback;
    try {
        return it->get<T>();
    } catch (const Json::exception& e) {
        fail(ErrorCode::Config, what + ": " + key + ": " + e.what());
    } catch (const Error& e) {
        fail(ErrorCode::Config, what + ": " + key + ": " + e.what());
    }
}

}  // namespace

AppConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& e) {
        fail(ErrorCode::Config, e.what());
    }
    const std::string what = path.string();
    Json root = parse_config_json(text, what);
    if (!root.is_object()) {
        fail(ErrorCode::Config, what + ": top level must be an object");
    }

    static const std::set<std::string> known = {"version", "calibration", "conversion", "cleaning",
                                                "matching", "bedroom_table", "service"};
    for (const auto& [key, value] : root.items()) {
        if (!known.contains(key)) fail(ErrorCode::Config, what + ": unknown key '" + key + "'");
    }

    AppConfig cfg;
    cfg.source = path;
    cfg.version = root.value("version", kConfigVersion);
    if (cfg.version != kConfigVersion) {
        fail(ErrorCode::Config, what + ": unsupported config version " + std::to_string(cfg.version));
    }
    cfg.calibration = section(root, "calibration", cfg.calibration, what);
    cfg.conversion = section(root, "conversion", cfg.conversion, what);
    cfg.cleaning = section(root, "cleaning", cfg.cleaning, what);

    if (auto it = root.find("matching"); it != root.end()) {
        cfg.min_similar = it->value("min_similar", cfg.min_similar);
        if (cfg.min_similar < 1) fail(ErrorCode::Config, what + ": matching.min_similar must be >= 1");
    }
    if (auto it = root.find("bedroom_table"); it != root.end()) {
        Json table = *it;
        if (it->is_string()) {
            auto file = path.parent_path() / it->get<std::string>();
            table = parse_config_json(read_file(file), file.string());
        }
        Json wrapper = Json::object();
        wrapper["bedroom_table"] = std::move(table);
        cfg.bedrooms = section(wrapper, "bedroom_table", cfg.bedrooms, what);
    }
    if (auto it = root.find("service"); it != root.end()) {
        cfg.service.host = it->value("host", cfg.service.host);
        cfg.service.port = it->value("port", cfg.service.port);
        if (auto d = it->find("data_dir"); d != it->end() && !d->is_null()) {
            cfg.service.data_dir = path.parent_path() / d->get<std::string>();
        }
    }
    try {
        cfg.calibration.validate();
        cfg.conversion.validate();
        cfg.cleaning.validate();
    } catch (const Error& e) {
        fail(ErrorCode::Config, what + ": " + e.what());
    }
    if (cfg.service.port < 0 || cfg.service.port > 65535) {
        fail(ErrorCode::Config, what + ": service.port out of range");
    }
    return cfg;
}

void apply_env_overrides(ServiceConfig& service) {
    if (const char* port = std::getenv("ECOGRADE_PORT"); port && *port) {
        int v = 0;
        std::string_view s(port);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || v < 0 || v > 65535) {
            fail(ErrorCode::Config, "ECOGRADE_PORT must be a port number");
        }
        service.port = v;
    }
    if (const char* dir = std::getenv("ECOGRADE_DATA_DIR"); dir && *dir) {
        service.data_dir = std::filesystem::path(dir);
    }
}

Json to_json(const AppConfig& config) {
    Json service = {{"host", config.service.host}, {"port", config.service.port}};
    if (config.service.data_dir) service["data_dir"] = config.service.data_dir->string();
    return Json{{"version", config.version},
                {"calibration", config.calibration},
                {"conversion", config.conversion},
                {"cleaning", config.cleaning},
                {"matching", {{"min_similar", config.min_similar}}},
                {"bedroom_table", config.bedrooms},
                {"service", std::move(service)}};
}

}  // namespace ecograde
