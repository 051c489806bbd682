#include "ecograde/score/factors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ecograde/core/error.hpp"

namespace ecograde {
namespace {

constexpr double kMinBeta = 1e-6;
constexpr double kMaxBeta = 1e6;

}  // namespace

void ScoreCalibration::validate() const {
    if (!(kwh_floor < kwh_cap)) {
        fail(ErrorCode::Config, "kwh_floor must be below kwh_cap");
    }
    if (!(walk_cap_hours > 0.0)) {
        fail(ErrorCode::Config, "walk_cap_hours must be positive");
    }
    for (double b : leaf_curve_beta) {
        if (!(b > 0.0) || !std::isfinite(b)) {
            fail(ErrorCode::Config, "leaf_curve_beta must be positive");
        }
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            fail(ErrorCode::Config, "factor weights must be non-negative");
        }
        total += w;
    }
    if (!(total > 0.0)) {
        fail(ErrorCode::Config, "at least one factor weight must be positive");
    }
}

void to_json(Json& j, const ScoreCalibration& c) {
    Json beta = Json::object();
    Json weights = Json::object();
    for (Factor f : kAllFactors) {
        beta[std::string(to_string(f))] = c.leaf_curve_beta[index_of(f)];
        weights[std::string(to_string(f))] = c.weights[index_of(f)];
    }
    j = Json{{"kwh_floor", c.kwh_floor},
             {"kwh_cap", c.kwh_cap},
             {"walk_cap_hours", c.walk_cap_hours},
             {"leaf_curve_beta", std::move(beta)},
             {"weights", std::move(weights)},
             {"leaf_rounding", c.leaf_rounding == LeafRounding::HalfUp ? "half_up" : "truncate"}};
}

void from_json(const Json& j, ScoreCalibration& c) {
    ScoreCalibration d;
    c.kwh_floor = j.value("kwh_floor", d.kwh_floor);
    c.kwh_cap = j.value("kwh_cap", d.kwh_cap);
    c.walk_cap_hours = j.value("walk_cap_hours", d.walk_cap_hours);
    c.leaf_curve_beta = d.leaf_curve_beta;
    c.weights = d.weights;
    auto per_factor = [](const Json& obj, std::array<double, kFactorCount>& out) {
        if (obj.is_number()) {
            out.fill(obj.get<double>());
            return;
        }
        for (const auto& [key, value] : obj.items()) {
            auto f = parse_factor(key);
            if (!f) {
                fail(ErrorCode::Config, "unknown factor '" + key + "'");
            }
            out[index_of(*f)] = value.get<double>();
        }
    };
    if (auto it = j.find("leaf_curve_beta"); it != j.end()) per_factor(*it, c.leaf_curve_beta);
    if (auto it = j.find("weights"); it != j.end()) per_factor(*it, c.weights);
    std::string rounding = j.value("leaf_rounding", std::string("half_up"));
    if (rounding == "half_up") {
        c.leaf_rounding = LeafRounding::HalfUp;
    } else if (rounding == "truncate") {
        c.leaf_rounding = LeafRounding::Truncate;
    } else {
        fail(ErrorCode::Config, "leaf_rounding must be half_up or truncate");
    }
}

void ConversionFactors::validate() const {
    for (const auto& f : {electricity_kg_per_kwh, gas_kg_per_kwh}) {
        if (f && !(*f > 0.0)) {
            fail(ErrorCode::Config, "conversion factors must be positive");
        }
    }
}

void to_json(Json& j, const ConversionFactors& c) {
    j = Json{{"electricity_kg_per_kwh", c.electricity_kg_per_kwh ? Json(*c.electricity_kg_per_kwh) : Json(nullptr)},
             {"gas_kg_per_kwh", c.gas_kg_per_kwh ? Json(*c.gas_kg_per_kwh) : Json(nullptr)},
             {"effective_year", c.effective_year}};
}

void from_json(const Json& j, ConversionFactors& c) {
    auto read = [&](const char* key) -> std::optional<double> {
        auto it = j.find(key);
        if (it == j.end() || it->is_null()) return std::nullopt;
        return it->get<double>();
    };
    c.electricity_kg_per_kwh = read("electricity_kg_per_kwh");
    c.gas_kg_per_kwh = read("gas_kg_per_kwh");
    c.effective_year = j.value("effective_year", 0);
}

double effective_factor(const ConversionFactors& factors, const FuelMix& mix) {
    double total = 0.0;
    if (mix.electricity_share > 0.0) {
        if (!factors.electricity_kg_per_kwh) {
            fail(ErrorCode::Config, "missing electricity conversion factor");
        }
        total += mix.electricity_share * *factors.electricity_kg_per_kwh;
    }
    if (mix.gas_share > 0.0) {
        if (!factors.gas_kg_per_kwh) {
            fail(ErrorCode::Config, "missing gas conversion factor");
        }
        total += mix.gas_share * *factors.gas_kg_per_kwh;
    }
    return total;
}

double consumption_factor(double kwh_per_m2, const ScoreCalibration& calib) {
    require(kwh_per_m2 >= 0.0, "kWh/m² must be non-negative");
    double t = (kwh_per_m2 - calib.kwh_floor) / (calib.kwh_cap - calib.kwh_floor);
    return 1.0 - std::clamp(t, 0.0, 1.0);
}

std::optional<double> efficiency_factor(std::span<const std::optional<double>> attribute_scores) {
    double sum = 0.0;
    int n = 0;
    for (const auto& s : attribute_scores) {
        if (s) {
            sum += *s;
            ++n;
        }
    }
    if (n == 0) {
        return std::nullopt;
    }
    return sum / n;
}

std::optional<double> supplier_factor(const std::optional<Tariff>& tariff) {
    if (!tariff) {
        return std::nullopt;
    }
    require(tariff->renewable_fraction >= 0.0 && tariff->renewable_fraction <= 1.0,
            "renewable_fraction outside [0,1]");
    return tariff->renewable_fraction * (tariff->gas_main_heat ? kGasHeatingPenalty : 1.0);
}

double transport_factor(double mean_time_hours, const ScoreCalibration& calib) {
    require(mean_time_hours >= 0.0, "transport time must be non-negative");
    return std::max(0.0, 1.0 - mean_time_hours / calib.walk_cap_hours);
}

double to_leaf_scale(double x, double beta) {
    require(x >= 0.0 && x <= 1.0, "leaf-scale input outside [0,1]");
    require(beta > 0.0, "leaf curve beta must be positive");
    if (x == 1.0) {
        return 5.0;
    }
    return 5.0 * std::log1p(beta * x) / std::log1p(beta);
}

double ecograde(const FactorScores& factor_scores, const std::array<double, kFactorCount>& weights) {
    double sum = 0.0;
    double weight = 0.0;
    for (std::size_t i = 0; i < kFactorCount; ++i) {
        if (factor_scores[i] && weights[i] > 0.0) {
            sum += weights[i] * *factor_scores[i];
            weight += weights[i];
        }
    }
    if (weight == 0.0) {
        fail(ErrorCode::NoScore, "no factor available");
    }
    return sum / weight;
}

Co2Estimate co2_estimate(const KwhRange& kwh, double floor_area, const ConversionFactors& factors,
                         const FuelMix& mix) {
    require(floor_area > 0.0, "floor area must be positive");
    require(kwh.min <= kwh.mean && kwh.mean <= kwh.max, "kWh range must be ordered");
    const double kg_per_kwh = effective_factor(factors, mix);
    auto tonnes = [&](double k) { return k * floor_area * kg_per_kwh / 1000.0; };
    return {tonnes(kwh.mean), tonnes(kwh.min), tonnes(kwh.max)};
}

double calibrate_beta(std::span<const double> inputs, double target_score) {
    require(!inputs.empty(), "calibration needs at least one input");
    require(target_score > 0.0 && target_score < 5.0, "target score must lie in (0,5)");
    std::vector<double> sorted(inputs.begin(), inputs.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    median = std::clamp(median, 0.0, 1.0);

    // Score at fixed x increases with beta, from 5x (beta -> 0) toward 5.
    auto score = [&](double beta) { return 5.0 * std::log1p(beta * median) / std::log1p(beta); };
    if (score(kMinBeta) >= target_score) {
        return kMinBeta;
    }
    if (score(kMaxBeta) <= target_score) {
        return kMaxBeta;
    }
    double lo = std::log(kMinBeta);
    double hi = std::log(kMaxBeta);
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (score(std::exp(mid)) < target_score) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::exp(0.5 * (lo + hi));
}

}  // namespace ecograde
