#pragma once

#include <array>
#include <optional>
#include <span>

#include "ecograde/core/model.hpp"
#include "ecograde/core/serialize.hpp"

namespace ecograde {

/// Normalization bounds and the 0..5 leaf curve.
struct ScoreCalibration {
    double kwh_floor = 0.0;       // kWh/m²·yr mapped to consumption 1.0
    double kwh_cap = 500.0;       // kWh/m²·yr mapped to consumption 0.0
    double walk_cap_hours = 1.0;  // walking time mapped to transport 0.0
    std::array<double, kFactorCount> leaf_curve_beta = {9.0, 9.0, 9.0, 9.0};
    std::array<double, kFactorCount> weights = {1.0, 1.0, 1.0, 1.0};
    LeafRounding leaf_rounding = LeafRounding::HalfUp;

    /// Throws Error(Config) when an invariant does not hold.
    void validate() const;

    double beta(Factor f) const noexcept { return leaf_curve_beta[index_of(f)]; }
};

void to_json(Json& j, const ScoreCalibration& c);
void from_json(const Json& j, ScoreCalibration& c);

/// Emission factors in kg CO₂e per kWh.
struct ConversionFactors {
    std::optional<double> electricity_kg_per_kwh = 0.20707;
    std::optional<double> gas_kg_per_kwh = 0.18254;
    int effective_year = 2023;

    void validate() const;
};

void to_json(Json& j, const ConversionFactors& c);
void from_json(const Json& j, ConversionFactors& c);

struct FuelMix {
    double electricity_share = 1.0;
    double gas_share = 0.0;

    static FuelMix electricity_only() noexcept { return {1.0, 0.0}; }
    static FuelMix gas_heated() noexcept { return {0.5, 0.5}; }
};

/// Weighted kg CO₂e per kWh for a mix. Throws Error(Config) if a used fuel has no factor.
double effective_factor(const ConversionFactors& factors, const FuelMix& mix);

inline constexpr double kGasHeatingPenalty = 0.5;

/// 1 - clamp((kwh - floor) / (cap - floor), 0, 1).
double consumption_factor(double kwh_per_m2, const ScoreCalibration& calib = {});

/// Mean of the attributes present; nullopt when none are.
std::optional<double> efficiency_factor(std::span<const std::optional<double>> attribute_scores);

/// Renewable fraction, halved for gas main heating; nullopt without tariff data.
/// Throws Error(ContractViolation) for a fraction outside [0,1].
std::optional<double> supplier_factor(const std::optional<Tariff>& tariff);

/// max(0, 1 - hours / walk_cap_hours).
double transport_factor(double mean_time_hours, const ScoreCalibration& calib = {});

/// 5·ln(1 + beta·x) / ln(1 + beta): strictly increasing from 0 to 5 on [0,1].
/// Throws Error(ContractViolation) for x outside [0,1] or beta <= 0.
double to_leaf_scale(double x, double beta);

/// Weighted mean of the factors present (plain mean under equal weights).
/// Throws Error(NoScore) when no factor is present.
double ecograde(const FactorScores& factor_scores, const std::array<double, kFactorCount>& weights = {1.0, 1.0, 1.0, 1.0});

struct KwhRange {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct Co2Estimate {
    double avg = 0.0;
    double low = 0.0;
    double high = 0.0;
};

/// kWh/m² x m² x kg/kWh / 1000 for each bound, in tonnes per year.
Co2Estimate co2_estimate(const KwhRange& kwh, double floor_area, const ConversionFactors& factors,
                         const FuelMix& mix);

/// Beta that maps the median of `inputs` to 2.5 leaves. Medians at or above
/// 0.5 cannot be pulled down by this curve family; the smallest allowed beta
/// is returned for them.
double calibrate_beta(std::span<const double> inputs, double target_score = 2.5);

}  // namespace ecograde
