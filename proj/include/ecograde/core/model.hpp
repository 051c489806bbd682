#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecograde/core/band.hpp"
#include "ecograde/core/date.hpp"

namespace ecograde {

/// One energy performance certificate after parsing.
struct EpcRecord {
    std::string address_key;  // normalized, see normalize_address()
    std::string postcode;     // normalized, see normalize_postcode()
    double floor_area = 0.0;  // m²
    AttributeBands bands{};
    double kwh_per_m2 = 0.0;  // predicted kWh per m² per year
    Date lodgement_date{};
    // A..G. Only consulted by cleaning and deduplication, never by scoring.
    std::optional<char> headline_rating;
    bool gas_main_heat = false;

    std::size_t band_count() const noexcept;
    bool operator==(const EpcRecord&) const = default;
};

struct Tariff {
    double renewable_fraction = 0.0;  // [0,1]
    bool gas_main_heat = false;

    bool operator==(const Tariff&) const = default;
};

/// A rentable property offered on the marketplace.
struct Listing {
    std::string id;
    std::string address_key;
    std::string postcode;
    double latitude = 0.0;
    double longitude = 0.0;
    std::optional<int> bedrooms;  // 0 = studio
    std::string city;
    std::optional<Tariff> tariff;
    std::optional<double> meter_kwh_per_m2;
    std::optional<std::string> supplier_id;

    bool operator==(const Listing&) const = default;
};

enum class Factor : std::size_t {
    Consumption = 0,
    Efficiency = 1,
    Supplier = 2,
    Transport = 3,
};

inline constexpr std::size_t kFactorCount = 4;
inline constexpr std::array<Factor, kFactorCount> kAllFactors = {
    Factor::Consumption, Factor::Efficiency, Factor::Supplier, Factor::Transport};

std::string_view to_string(Factor factor) noexcept;
std::optional<Factor> parse_factor(std::string_view name) noexcept;

constexpr std::size_t index_of(Factor factor) noexcept {
    return static_cast<std::size_t>(factor);
}

/// Per-factor values; nullopt means the factor is unavailable for this listing.
using FactorScores = std::array<std::optional<double>, kFactorCount>;

enum class ProvenanceKind {
    Direct,        // certificate for this exact address
    Interpolated,  // mean of similar neighboring certificates
    Meter,         // smart-meter consumption reading
    None,          // no certificate data; only tariff or transport factors
};

std::string_view to_string(ProvenanceKind kind) noexcept;
std::optional<ProvenanceKind> parse_provenance_kind(std::string_view name) noexcept;

struct Provenance {
    ProvenanceKind kind = ProvenanceKind::Direct;
    int n_neighbors = 0;   // certificates behind the efficiency and CO₂ figures
    bool widened = false;  // neighbors came from the outward postcode

    bool operator==(const Provenance&) const = default;
};

/// Tonnes CO₂ per year.
struct Co2Summary {
    double avg = 0.0;
    double low = 0.0;
    double high = 0.0;
    double sigma = 0.0;  // sample sd across the certificates used; 0 for a single one
    int samples = 1;

    bool operator==(const Co2Summary&) const = default;
};

struct EcoGradeReport {
    std::string listing_id;
    std::string city;
    std::optional<int> bedrooms;
    FactorScores factor_scores{};   // leaf scale, [0,5]
    FactorScores factor_inputs{};   // normalized raw factor, [0,1]
    AttributeScores attribute_scores{};
    double overall = 0.0;
    int leaves = 0;
    std::optional<double> floor_area;
    std::optional<double> kwh_per_m2;
    std::optional<Co2Summary> co2;
    Provenance provenance{};
    std::vector<Factor> missing_factors;

    bool operator==(const EcoGradeReport&) const = default;
};

enum class LeafRounding {
    HalfUp,
    Truncate,
};

/// Integer leaf count (0..5) for an overall score.
int leaves_for(double overall, LeafRounding rounding = LeafRounding::HalfUp) noexcept;

struct CityBaseline {
    std::string city;
    int bed_type = 0;
    double c_mu = 0.0;
    double c_sigma = 0.0;
    int c_n = 0;

    bool operator==(const CityBaseline&) const = default;
};

}  // namespace ecograde
