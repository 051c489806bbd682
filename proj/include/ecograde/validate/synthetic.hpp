#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ecograde/core/model.hpp"
#include "ecograde/geo/geo.hpp"
#include "ecograde/ingest/bedrooms.hpp"
#include "ecograde/validate/rng.hpp"

namespace ecograde {

/// Knobs for one synthetic city. Dwelling quality is a latent value in
/// [0,1] built from city, district, postcode and dwelling terms, so that
/// certificates in the same postcode resemble each other.
struct SyntheticCityParams {
    std::string name = "Manchester";
    std::uint64_t seed = 1;
    int n_addresses = 1000;
    double epc_coverage_fraction = 0.6;

    double center_lat = 52.0;
    double center_lon = -1.5;
    double radius_km = 8.0;
    std::string outward_prefix = "M";
    int districts = 8;
    int postcodes_per_district = 10;
    int dwellings_per_postcode = 14;  // certified dwellings besides the listings

    double quality_mean = 0.3;
    double district_sd = 0.05;
    double postcode_sd = 0.06;
    double dwelling_sd = 0.03;
    double attribute_noise_sd = 0.08;
    double kwh_at_worst = 480.0;  // kWh/m² at quality 0
    double kwh_at_best = 60.0;    // kWh/m² at quality 1
    double kwh_noise_sd = 15.0;
    double gas_share = 0.8;
    double tariff_fraction = 0.4;  // listings whose energy tariff is known
    std::array<double, 6> bedroom_mix = {0.10, 0.30, 0.30, 0.18, 0.08, 0.04};

    int metro_stations = 12;
    int bus_stops = 60;
    int bike_docks = 30;
    int car_share_bays = 10;
    int scooters_per_snapshot = 40;
    int snapshots = 3;
    double transport_spread = 0.5;  // point spread as a fraction of radius

    double duplicate_fraction = 0.05;  // older superseded certificates
    double anomaly_fraction = 0.01;    // data-entry errors for cleaning to remove

    /// Throws Error(Config).
    void validate() const;
};

/// The ten cities used for the validation study, each with its own seed derived from `base_seed`.
std::vector<SyntheticCityParams> default_cities(std::uint64_t base_seed = 20240101, int n_addresses = 1000);

struct SyntheticCity {
    std::string name;
    std::vector<Listing> listings;
    std::vector<EpcRecord> certificates;  // raw corpus: includes duplicates and anomalies
    TransportData transport;
    std::set<std::string> certified_listings;  // ids of listings with their own certificate
};

SyntheticCity generate_city(const SyntheticCityParams& params,
                            const BedroomLookupTable& bedrooms = BedroomLookupTable::defaults());

/// Uniform draw between the smallest and largest neighbor floor area.
/// Throws Error(NoComparableData) when there are no neighbors.
double assign_random_area(std::span<const EpcRecord> neighbors, Rng& rng);

}  // namespace ecograde
