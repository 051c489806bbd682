#include "ecograde/match/interpolate.hpp"

#include <algorithm>
#include <cmath>

#include "ecograde/core/address.hpp"
#include "ecograde/core/error.hpp"

namespace ecograde {
namespace {

// Incremental mean: stays exactly x when every sample equals x.
struct RunningMean {
    double mean = 0.0;
    double m2 = 0.0;
    int n = 0;

    void add(double x) {
        ++n;
        double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }

    double sample_sd() const { return n > 1 ? std::sqrt(std::max(0.0, m2 / (n - 1))) : 0.0; }
};

std::vector<EpcRecord> similar(const EpcIndex& index, std::span<const std::size_t> positions,
                               const Listing& listing, const BedroomLookupTable& table) {
    std::vector<EpcRecord> out;
    for (std::size_t pos : positions) {
        const auto& r = index.records()[pos];
        if (r.address_key == listing.address_key && r.postcode == listing.postcode) {
            continue;
        }
        try {
            if (table.infer(r.floor_area, listing.city) == *listing.bedrooms) {
                out.push_back(r);
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::OutOfRange) {
                throw;
            }
        }
    }
    return out;
}

}  // namespace

const EpcRecord* find_direct(const Listing& listing, const EpcIndex& index) {
    return index.find(normalize_address(listing.address_key), normalize_postcode(listing.postcode));
}

NeighborSet find_neighbors(const Listing& listing, const EpcIndex& index,
                           const BedroomLookupTable& table, int min_similar) {
    require(listing.bedrooms.has_value(), "listing bedroom count is required for neighbor search");
    if (!table.has_city(listing.city)) {
        fail(ErrorCode::UnknownCity, "no bedroom table for city '" + listing.city + "'");
    }
    NeighborSet out;
    out.records = similar(index, index.by_postcode(normalize_postcode(listing.postcode)), listing, table);
    if (static_cast<int>(out.records.size()) < min_similar) {
        out.records = similar(index, index.by_outward(outward_code(listing.postcode)), listing, table);
        out.widened = true;
    }
    if (out.records.empty()) {
        fail(ErrorCode::NoComparableData, "no comparable certificates near listing " + listing.id);
    }
    return out;
}

InterpolationResult interpolate(std::span<const EpcRecord> neighbors) {
    require(!neighbors.empty(), "interpolation needs at least one neighbor");
    InterpolationResult out;
    std::array<RunningMean, kAttributeCount> attrs{};
    RunningMean kwh;
    RunningMean area;
    int gas = 0;
    out.kwh_min = out.kwh_max = neighbors.front().kwh_per_m2;
    out.area_min = out.area_max = neighbors.front().floor_area;
    for (const auto& r : neighbors) {
        for (std::size_t i = 0; i < kAttributeCount; ++i) {
            if (r.bands[i]) {
                attrs[i].add(band_to_score(*r.bands[i]));
            }
        }
        kwh.add(r.kwh_per_m2);
        area.add(r.floor_area);
        out.kwh_min = std::min(out.kwh_min, r.kwh_per_m2);
        out.kwh_max = std::max(out.kwh_max, r.kwh_per_m2);
        out.area_min = std::min(out.area_min, r.floor_area);
        out.area_max = std::max(out.area_max, r.floor_area);
        gas += r.gas_main_heat ? 1 : 0;
    }
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        if (attrs[i].n > 0) {
            out.feature_means[i] = attrs[i].mean;
        }
    }
    out.kwh_mean = std::clamp(kwh.mean, out.kwh_min, out.kwh_max);
    out.kwh_sd = kwh.sample_sd();
    out.area_mean = std::clamp(area.mean, out.area_min, out.area_max);
    out.n_neighbors = static_cast<int>(neighbors.size());
    out.gas_fraction = static_cast<double>(gas) / static_cast<double>(neighbors.size());
    return out;
}

}  // namespace ecograde
