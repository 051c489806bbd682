#include "ecograde/geo/geo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "ecograde/core/error.hpp"
#include "ecograde/core/serialize.hpp"

namespace ecograde {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

TransportPoint point_from_json(const Json& j) {
    auto mode = parse_mode(j.at("mode").get<std::string>());
    if (!mode) {
        fail(ErrorCode::Parse, "unknown transport mode " + j.at("mode").dump());
    }
    TransportPoint p;
    p.location = GeoPoint::make(j.at("lat").get<double>(), j.at("lon").get<double>());
    p.mode = *mode;
    if (auto it = j.find("observed_at"); it != j.end() && !it->is_null()) {
        p.observed_at = it->get<std::string>();
    }
    return p;
}

Json point_to_json(const TransportPoint& p) {
    Json j{{"lat", p.location.lat}, {"lon", p.location.lon}, {"mode", std::string(to_string(p.mode))}};
    if (p.observed_at) {
        j["observed_at"] = *p.observed_at;
    }
    return j;
}

}  // namespace

GeoPoint GeoPoint::make(double lat, double lon) {
    require(lat >= -90.0 && lat <= 90.0, "latitude outside [-90, 90]");
    require(lon >= -180.0 && lon <= 180.0, "longitude outside [-180, 180]");
    return {lat, lon};
}

double haversine_km(GeoPoint a, GeoPoint s) noexcept {
    const double phi_a = a.lat * kDegToRad;
    const double phi_s = s.lat * kDegToRad;
    const double half_dphi = 0.5 * (phi_s - phi_a);
    const double half_dlambda = 0.5 * (s.lon - a.lon) * kDegToRad;
    const double sin_dphi = std::sin(half_dphi);
    const double sin_dlambda = std::sin(half_dlambda);
    const double cos_dphi = std::cos(half_dphi);
    const double cross = std::cos(phi_a) * std::cos(phi_s) * sin_dlambda * sin_dlambda;
    // h and 1 - h are formed separately; asin(sqrt(h)) loses half its digits as h approaches 1.
    const double h = std::max(sin_dphi * sin_dphi + cross, 0.0);
    const double h_complement = std::max(cos_dphi * cos_dphi - cross, 0.0);
    return 2.0 * kEarthRadiusKm * std::atan2(std::sqrt(h), std::sqrt(h_complement));
}

std::string_view to_string(TransportMode mode) noexcept {
    switch (mode) {
        case TransportMode::BikeShare: return "bike_share";
        case TransportMode::EScooter: return "e_scooter";
        case TransportMode::MetroStation: return "metro_station";
        case TransportMode::BusStop: return "bus_stop";
        case TransportMode::CarShare: return "car_share";
    }
    return "unknown";
}

std::optional<TransportMode> parse_mode(std::string_view name) noexcept {
    for (auto m : kAllModes) {
        if (to_string(m) == name) {
            return m;
        }
    }
    return std::nullopt;
}

std::optional<double> nearest_distance_km(GeoPoint from, std::span<const TransportPoint> points,
                                          TransportMode mode) noexcept {
    std::optional<double> best;
    for (const auto& p : points) {
        if (p.mode != mode) {
            continue;
        }
        double d = haversine_km(from, p.location);
        if (!best || d < *best) {
            best = d;
        }
    }
    return best;
}

double nearest_mobile(GeoPoint from, std::span<const Snapshot> snapshots, TransportMode mode) {
    std::optional<double> best;
    for (const auto& snap : snapshots) {
        auto d = nearest_distance_km(from, snap.points, mode);
        if (d && (!best || *d < *best)) {
            best = d;
        }
    }
    if (!best) {
        fail(ErrorCode::NoOption, "no " + std::string(to_string(mode)) + " in any snapshot");
    }
    return *best;
}

double walking_time_hours(double distance_km) {
    require(distance_km >= 0.0, "distance must be non-negative");
    return distance_km / kWalkingSpeedKmh;
}

AccessSummary access_summary(GeoPoint from, std::span<const TransportPoint> fixed_points,
                             std::span<const Snapshot> mobile_snapshots) {
    AccessSummary out;
    double total = 0.0;
    for (auto mode : kAllModes) {
        std::optional<double> best = nearest_distance_km(from, fixed_points, mode);
        if (is_mobile(mode)) {
            for (const auto& snap : mobile_snapshots) {
                auto d = nearest_distance_km(from, snap.points, mode);
                if (d && (!best || *d < *best)) {
                    best = d;
                }
            }
        }
        if (!best) {
            out.missing_modes.push_back(mode);
            continue;
        }
        ModeAccess access{*best, walking_time_hours(*best)};
        total += access.hours;
        out.modes.emplace(mode, access);
    }
    if (out.modes.empty()) {
        fail(ErrorCode::NoTransportData, "no transport options of any mode");
    }
    out.mean_time_hours = total / static_cast<double>(out.modes.size());
    return out;
}

std::vector<TransportPoint> read_transport_points(std::istream& in) {
    std::vector<TransportPoint> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            out.push_back(point_from_json(Json::parse(line)));
        } catch (const Json::exception& e) {
            fail(ErrorCode::Parse, "transport line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::string snapshot_timestamp(const std::filesystem::path& file) {
    std::string stem = file.stem().string();
    auto underscore = stem.find('_');
    return underscore == std::string::npos ? stem : stem.substr(underscore + 1);
}

TransportData load_transport_dir(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    TransportData data;
    if (auto fixed = dir / "fixed.jsonl"; fs::exists(fixed)) {
        std::istringstream in(read_file(fixed));
        data.fixed = read_transport_points(in);
    }
    if (auto snaps = dir / "snapshots"; fs::is_directory(snaps)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(snaps)) {
            if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
            return snapshot_timestamp(a) < snapshot_timestamp(b);
        });
        for (const auto& f : files) {
            std::istringstream in(read_file(f));
            Snapshot snap{snapshot_timestamp(f), read_transport_points(in)};
            for (auto& p : snap.points) {
                if (!p.observed_at) {
                    p.observed_at = snap.captured_at;
                }
            }
            data.snapshots.push_back(std::move(snap));
        }
    }
    return data;
}

void write_transport_dir(const std::filesystem::path& dir, const TransportData& data) {
    std::ostringstream fixed;
    for (const auto& p : data.fixed) {
        fixed << point_to_json(p).dump() << '\n';
    }
    write_file(dir / "fixed.jsonl", fixed.str());
    for (const auto& snap : data.snapshots) {
        std::ostringstream out;
        for (const auto& p : snap.points) {
            out << point_to_json(p).dump() << '\n';
        }
        write_file(dir / "snapshots" / ("snapshot_" + snap.captured_at + ".jsonl"), out.str());
    }
}

}  // namespace ecograde
