#pragma once

#include <span>
#include <vector>

#include "ecograde/core/model.hpp"
#include "ecograde/ingest/bedrooms.hpp"
#include "ecograde/match/epc_index.hpp"

namespace ecograde {

inline constexpr int kDefaultMinSimilar = 3;

/// Certificate for the listing's exact (address, postcode), or nullptr.
const EpcRecord* find_direct(const Listing& listing, const EpcIndex& index);

struct NeighborSet {
    std::vector<EpcRecord> records;
    bool widened = false;
};

/// Similar certificates: same full postcode and same inferred bedroom count.
/// With fewer than `min_similar`, widens to the outward postcode and returns
/// every similar record found there. Certificates whose area falls outside the
/// city's bedroom table are not comparable and are skipped.
///
/// Throws Error(ContractViolation) if the listing has no bedroom count,
/// Error(UnknownCity) if the table lacks the listing's city, and
/// Error(NoComparableData) when nothing similar exists even after widening.
NeighborSet find_neighbors(const Listing& listing, const EpcIndex& index,
                           const BedroomLookupTable& table, int min_similar = kDefaultMinSimilar);

struct InterpolationResult {
    AttributeScores feature_means{};  // nullopt when no neighbor reports the attribute
    double kwh_mean = 0.0;
    double kwh_min = 0.0;
    double kwh_max = 0.0;
    double kwh_sd = 0.0;  // sample sd, 0 for one neighbor
    double area_mean = 0.0;
    double area_min = 0.0;
    double area_max = 0.0;
    double gas_fraction = 0.0;  // share of neighbors heated by mains gas
    int n_neighbors = 0;
    bool widened = false;
};

/// Means over neighbors (attributes over reporting neighbors only), and the
/// kWh/m² extremes. Throws Error(ContractViolation) on an empty input.
InterpolationResult interpolate(std::span<const EpcRecord> neighbors);

}  // namespace ecograde
