#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "ecograde/core/error.hpp"
#include "ecograde/geo/geo.hpp"

using namespace ecograde;

namespace {

// Great-circle distance from unit vectors: atan2(|a x b|, a . b).
double vector_distance_km(GeoPoint p, GeoPoint q) {
    constexpr double deg = std::numbers::pi / 180.0;
    auto unit = [](GeoPoint g) {
        double la = g.lat * deg, lo = g.lon * deg;
        return std::array<double, 3>{std::cos(la) * std::cos(lo), std::cos(la) * std::sin(lo), std::sin(la)};
    };
    auto a = unit(p), b = unit(q);
    std::array<double, 3> c = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    double cross = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    return kEarthRadiusKm * std::atan2(cross, dot);
}

}  // namespace

TEST_CASE("haversine identity and antipodes") {
    CHECK(haversine_km({51.5, -0.12}, {51.5, -0.12}) == 0.0);
    const double half = std::numbers::pi * kEarthRadiusKm;
    CHECK(haversine_km({0, 0}, {0, 180}) == doctest::Approx(half).epsilon(1e-12));
    CHECK(haversine_km({90, 0}, {-90, 0}) == doctest::Approx(half).epsilon(1e-12));
    CHECK(haversine_km({35, 20}, {-35, -160}) == doctest::Approx(half).epsilon(1e-9));
}

TEST_CASE("haversine agrees with the vector formula") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
    for (int i = 0; i < 2000; ++i) {
        GeoPoint a{lat(gen), lon(gen)}, b{lat(gen), lon(gen)};
        double expected = vector_distance_km(a, b);
        CHECK(haversine_km(a, b) == doctest::Approx(expected).epsilon(1e-9));
        CHECK(haversine_km(a, b) == haversine_km(b, a));
    }
}

TEST_CASE("coordinates are validated") {
    CHECK_NOTHROW(GeoPoint::make(90, -180));
    CHECK_THROWS_AS(GeoPoint::make(90.1, 0), Error);
    CHECK_THROWS_AS(GeoPoint::make(0, 180.5), Error);
}

TEST_CASE("walking time at 5 km/h") {
    CHECK(walking_time_hours(0.0) == 0.0);
    CHECK(walking_time_hours(5.0) == 1.0);
    CHECK(walking_time_hours(1.25) == 0.25);
    CHECK_THROWS_AS(walking_time_hours(-0.1), Error);
}

namespace {

TransportPoint point(double lat, double lon, TransportMode mode) {
    return {{lat, lon}, mode, std::nullopt};
}

}  // namespace

TEST_CASE("nearest fixed and mobile options") {
    GeoPoint home{51.5, -0.1};
    std::vector<TransportPoint> fixed = {point(51.51, -0.1, TransportMode::BusStop),
                                         point(51.52, -0.1, TransportMode::BusStop),
                                         point(51.6, -0.1, TransportMode::MetroStation)};
    auto bus = nearest_distance_km(home, fixed, TransportMode::BusStop);
    REQUIRE(bus);
    CHECK(*bus == doctest::Approx(haversine_km(home, {51.51, -0.1})));
    CHECK_FALSE(nearest_distance_km(home, fixed, TransportMode::BikeShare));

    std::vector<Snapshot> snaps = {
        {"2024-03-01T0800", {point(51.55, -0.1, TransportMode::EScooter)}},
        {"2024-03-01T1200", {point(51.502, -0.1, TransportMode::EScooter)}},
    };
    CHECK(nearest_mobile(home, snaps, TransportMode::EScooter) ==
          doctest::Approx(haversine_km(home, {51.502, -0.1})));
    CHECK_THROWS_AS(nearest_mobile(home, snaps, TransportMode::CarShare), Error);

    AccessSummary s = access_summary(home, fixed, snaps);
    CHECK(s.modes.size() == 3);
    double expected = (walking_time_hours(*bus) +
                       walking_time_hours(haversine_km(home, {51.6, -0.1})) +
                       walking_time_hours(haversine_km(home, {51.502, -0.1}))) / 3.0;
    CHECK(s.mean_time_hours == doctest::Approx(expected).epsilon(1e-12));
    CHECK(s.missing_modes == std::vector<TransportMode>{TransportMode::BikeShare, TransportMode::CarShare});
    CHECK_THROWS_AS(access_summary(home, {}, {}), Error);
}

TEST_CASE("transport directory round trip") {
    auto dir = std::filesystem::temp_directory_path() / "ecograde_transport_test";
    std::filesystem::remove_all(dir);
    TransportData data;
    data.fixed = {point(51.5, -0.1, TransportMode::MetroStation), point(51.4, -0.2, TransportMode::BikeShare)};
    data.snapshots = {{"2024-03-01T1200", {{{51.45, -0.15}, TransportMode::CarShare, "2024-03-01T12:00:00Z"}}},
                      {"2024-03-01T0800", {{{51.46, -0.15}, TransportMode::EScooter, "2024-03-01T08:00:00Z"}}}};
    write_transport_dir(dir, data);
    TransportData back = load_transport_dir(dir);
    CHECK(back.fixed.size() == 2);
    CHECK(back.fixed[1].mode == TransportMode::BikeShare);
    REQUIRE(back.snapshots.size() == 2);
    CHECK(back.snapshots[0].captured_at == "2024-03-01T0800");
    CHECK(back.snapshots[1].points[0].location == GeoPoint{51.45, -0.15});
    CHECK(snapshot_timestamp("snapshots/snapshot_2024-03-01T0800.jsonl") == "2024-03-01T0800");
    std::filesystem::remove_all(dir);
    CHECK(load_transport_dir(dir).empty());
}

TEST_CASE("mode names") {
    for (TransportMode m : kAllModes) CHECK(parse_mode(to_string(m)) == m);
    CHECK(is_mobile(TransportMode::EScooter));
    CHECK_FALSE(is_mobile(TransportMode::BikeShare));
}
