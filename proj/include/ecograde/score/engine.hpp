#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecograde/core/model.hpp"
#include "ecograde/geo/geo.hpp"
#include "ecograde/ingest/bedrooms.hpp"
#include "ecograde/match/epc_index.hpp"
#include "ecograde/match/interpolate.hpp"
#include "ecograde/score/factors.hpp"

namespace ecograde {

/// Everything the scorer reads. The referenced data must outlive the context.
struct ScoringContext {
    const EpcIndex* index = nullptr;
    const BedroomLookupTable* bedrooms = nullptr;
    const TransportData* transport = nullptr;
    ScoreCalibration calibration{};
    ConversionFactors conversion{};
    int min_similar = kDefaultMinSimilar;
};

struct ListingOverrides {
    /// Floor area for listings scored from neighbors; defaults to the neighbors' mean area.
    std::optional<double> floor_area;
};

/// Scores one listing: a direct certificate when present, otherwise
/// neighbor interpolation; smart-meter readings replace certificate
/// consumption. Throws Error(NoScore) when no factor can be computed.
EcoGradeReport score_listing(const Listing& listing, const ScoringContext& ctx,
                             const ListingOverrides& overrides = {});

/// Builds the leaf-scale scores, overall, leaves and missing list from raw factor inputs.
void finalize_scores(EcoGradeReport& report, const FactorScores& inputs, const ScoreCalibration& calib);

/// Overall score if one attribute had the given score instead (what-if).
double what_if_attribute(const EcoGradeReport& report, EpcAttribute attribute, double new_score,
                         const ScoreCalibration& calib);

struct ScoreDiagnostic {
    std::string listing_id;
    std::string reason;
};

struct BatchScores {
    std::vector<EcoGradeReport> reports;       // listing order
    std::vector<ScoreDiagnostic> diagnostics;  // listings left unscored
};

BatchScores score_all(std::span<const Listing> listings, const ScoringContext& ctx);

}  // namespace ecograde
