#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ecograde/core/model.hpp"
#include "ecograde/core/serialize.hpp"
#include "ecograde/ingest/bedrooms.hpp"
#include "ecograde/ingest/epc_ingest.hpp"
#include "ecograde/score/factors.hpp"
#include "ecograde/validate/synthetic.hpp"
#include "ecograde/validate/tost.hpp"

namespace ecograde {

struct ValidationOptions {
    double margin = 0.1;
    double alpha = 0.05;
    /// Added to every interpolated score before comparison; 0 in a real run.
    double inject_shift = 0.0;
    int min_similar = 3;
    ScoreCalibration calibration{};
    ConversionFactors conversion{};
    CleaningRules cleaning{};
    BedroomLookupTable bedrooms = BedroomLookupTable::defaults();
};

struct GroupComparison {
    std::string group;
    int n_direct = 0;
    int n_interpolated = 0;
    double mean_direct = 0.0;
    double mean_interpolated = 0.0;
    double gap = 0.0;  // |mean_interpolated - mean_direct|
};

struct ScoredListing {
    EcoGradeReport report;
    bool interpolated = false;
    double compared_score = 0.0;  // overall, plus inject_shift for interpolated listings
};

struct ValidationReport {
    std::vector<GroupComparison> by_city;
    std::vector<GroupComparison> by_bed_type;
    TostResult tost;
    std::vector<std::string> diagnostics;
    std::vector<ScoredListing> listings;
    ValidationOptions options;
    std::uint64_t base_seed = 0;
};

/// Generates, cleans, indexes and scores every city, then compares
/// interpolated (G1) with direct (G2) scores. Cities without listings are
/// omitted with a diagnostic.
ValidationReport run_validation(std::span<const SyntheticCityParams> cities, const ValidationOptions& options = {});

/// Machine-readable summary (everything except per-listing data).
Json summary_json(const ValidationReport& report);

/// summary.json, city_means.csv, bed_type_means.csv and the histogram/raincloud files.
void write_validation_outputs(const std::filesystem::path& dir, const ValidationReport& report);

}  // namespace ecograde
