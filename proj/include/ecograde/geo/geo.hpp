#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ecograde {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kWalkingSpeedKmh = 5.0;

/// Latitude/longitude in degrees.
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    /// Throws Error(ContractViolation) outside [-90,90] x [-180,180].
    static GeoPoint make(double lat, double lon);

    bool operator==(const GeoPoint&) const = default;
};

/// Great-circle distance on a sphere of radius 6371 km (haversine form).
double haversine_km(GeoPoint a, GeoPoint s) noexcept;

enum class TransportMode {
    BikeShare,
    EScooter,
    MetroStation,
    BusStop,
    CarShare,
};

inline constexpr TransportMode kAllModes[] = {
    TransportMode::BikeShare, TransportMode::EScooter, TransportMode::MetroStation,
    TransportMode::BusStop, TransportMode::CarShare};

std::string_view to_string(TransportMode mode) noexcept;
std::optional<TransportMode> parse_mode(std::string_view name) noexcept;

/// Free-floating vehicles whose positions change between captures.
constexpr bool is_mobile(TransportMode mode) noexcept {
    return mode == TransportMode::EScooter || mode == TransportMode::CarShare;
}

struct TransportPoint {
    GeoPoint location;
    TransportMode mode = TransportMode::BusStop;
    std::optional<std::string> observed_at;  // ISO-8601; required for mobile modes
};

/// All free-floating vehicles seen in one API capture.
struct Snapshot {
    std::string captured_at;
    std::vector<TransportPoint> points;
};

/// Nearest point of `mode`, or nullopt when there is none.
std::optional<double> nearest_distance_km(GeoPoint from, std::span<const TransportPoint> points,
                                          TransportMode mode) noexcept;

/// Minimum over snapshots of the nearest point of `mode`. Throws Error(NoOption).
double nearest_mobile(GeoPoint from, std::span<const Snapshot> snapshots, TransportMode mode);

/// distance / 5 km/h. Throws Error(ContractViolation) for negative distances.
double walking_time_hours(double distance_km);

struct ModeAccess {
    double distance_km = 0.0;
    double hours = 0.0;
};

struct AccessSummary {
    std::map<TransportMode, ModeAccess> modes;
    double mean_time_hours = 0.0;
    std::vector<TransportMode> missing_modes;
};

/// Nearest option per mode converted to walking time, then the unweighted
/// mean over modes that exist. Throws Error(NoTransportData) if none do.
AccessSummary access_summary(GeoPoint from, std::span<const TransportPoint> fixed_points,
                             std::span<const Snapshot> mobile_snapshots);

/// Fixed points and captures, as loaded from fixtures.
struct TransportData {
    std::vector<TransportPoint> fixed;
    std::vector<Snapshot> snapshots;

    bool empty() const noexcept { return fixed.empty() && snapshots.empty(); }
};

std::vector<TransportPoint> read_transport_points(std::istream& in);

/// Loads `fixed.jsonl` plus every `snapshots/<prefix>_<timestamp>.jsonl`,
/// captures ordered by timestamp. Missing parts are treated as empty.
TransportData load_transport_dir(const std::filesystem::path& dir);

void write_transport_dir(const std::filesystem::path& dir, const TransportData& data);

/// Capture timestamp encoded in a snapshot file name ("snapshot_2024-03-01T0800.jsonl").
std::string snapshot_timestamp(const std::filesystem::path& file);

}  // namespace ecograde
