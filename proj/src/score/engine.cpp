#include "ecograde/score/engine.hpp"

#include <algorithm>

#include "ecograde/core/error.hpp"

namespace ecograde {

void finalize_scores(EcoGradeReport& report, const FactorScores& inputs, const ScoreCalibration& calib) {
    report.factor_inputs = inputs;
    report.factor_scores = {};
    report.missing_factors.clear();
    for (Factor f : kAllFactors) {
        const auto& x = inputs[index_of(f)];
        if (x) {
            report.factor_scores[index_of(f)] = to_leaf_scale(std::clamp(*x, 0.0, 1.0), calib.beta(f));
        } else {
            report.missing_factors.push_back(f);
        }
    }
    report.overall = ecograde(report.factor_scores, calib.weights);
    report.leaves = leaves_for(report.overall, calib.leaf_rounding);
}

EcoGradeReport score_listing(const Listing& listing, const ScoringContext& ctx,
                             const ListingOverrides& overrides) {
    const ScoreCalibration& calib = ctx.calibration;

    EcoGradeReport report;
    report.listing_id = listing.id;
    report.city = listing.city;
    report.bedrooms = listing.bedrooms;
    report.provenance = {ProvenanceKind::None, 0, false};

    std::optional<KwhRange> kwh;
    std::optional<double> area;
    double kwh_sd = 0.0;
    int samples = 0;
    bool gas = false;

    const EpcRecord* direct = ctx.index ? find_direct(listing, *ctx.index) : nullptr;
    if (direct) {
        report.attribute_scores = to_scores(direct->bands);
        kwh = KwhRange{direct->kwh_per_m2, direct->kwh_per_m2, direct->kwh_per_m2};
        area = direct->floor_area;
        samples = 1;
        gas = direct->gas_main_heat;
        report.provenance = {ProvenanceKind::Direct, 1, false};
    } else if (ctx.index && ctx.bedrooms && listing.bedrooms) {
        try {
            NeighborSet neighbors = find_neighbors(listing, *ctx.index, *ctx.bedrooms, ctx.min_similar);
            InterpolationResult interp = interpolate(neighbors.records);
            report.attribute_scores = interp.feature_means;
            kwh = KwhRange{interp.kwh_mean, interp.kwh_min, interp.kwh_max};
            area = overrides.floor_area.value_or(interp.area_mean);
            kwh_sd = interp.kwh_sd;
            samples = interp.n_neighbors;
            gas = interp.gas_fraction > 0.5;
            report.provenance = {ProvenanceKind::Interpolated, interp.n_neighbors, neighbors.widened};
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoComparableData && e.code() != ErrorCode::UnknownCity) {
                throw;
            }
        }
    }

    if (listing.tariff && listing.tariff->gas_main_heat) {
        gas = true;
    }
    if (listing.meter_kwh_per_m2) {
        double m = *listing.meter_kwh_per_m2;
        require(m >= 0.0, "meter reading must be non-negative");
        kwh = KwhRange{m, m, m};
        kwh_sd = 0.0;
        samples = 1;
        report.provenance.kind = ProvenanceKind::Meter;
    }

    FactorScores inputs{};
    if (kwh) {
        inputs[index_of(Factor::Consumption)] = consumption_factor(kwh->mean, calib);
        report.kwh_per_m2 = kwh->mean;
    }
    inputs[index_of(Factor::Efficiency)] = efficiency_factor(report.attribute_scores);
    inputs[index_of(Factor::Supplier)] = supplier_factor(listing.tariff);
    if (ctx.transport && !ctx.transport->empty()) {
        try {
            GeoPoint where = GeoPoint::make(listing.latitude, listing.longitude);
            AccessSummary access = access_summary(where, ctx.transport->fixed, ctx.transport->snapshots);
            inputs[index_of(Factor::Transport)] = transport_factor(access.mean_time_hours, calib);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoTransportData) {
                throw;
            }
        }
    }

    if (kwh && area) {
        FuelMix mix = gas ? FuelMix::gas_heated() : FuelMix::electricity_only();
        Co2Estimate est = co2_estimate(*kwh, *area, ctx.conversion, mix);
        double per_kwh_m2 = *area * effective_factor(ctx.conversion, mix) / 1000.0;
        report.co2 = Co2Summary{est.avg, est.low, est.high, kwh_sd * per_kwh_m2, samples};
        report.floor_area = area;
    }

    finalize_scores(report, inputs, calib);
    return report;
}

double what_if_attribute(const EcoGradeReport& report, EpcAttribute attribute, double new_score,
                         const ScoreCalibration& calib) {
    AttributeScores attrs = report.attribute_scores;
    attrs[index_of(attribute)] = std::clamp(new_score, 0.0, 1.0);
    FactorScores scores = report.factor_scores;
    if (auto eff = efficiency_factor(attrs)) {
        scores[index_of(Factor::Efficiency)] = to_leaf_scale(*eff, calib.beta(Factor::Efficiency));
    }
    return ecograde(scores, calib.weights);
}

BatchScores score_all(std::span<const Listing> listings, const ScoringContext& ctx) {
    BatchScores out;
    out.reports.reserve(listings.size());
    for (const auto& listing : listings) {
        try {
            out.reports.push_back(score_listing(listing, ctx));
        } catch (const Error& e) {
            out.diagnostics.push_back({listing.id, std::string(to_string(e.code())) + ": " + e.what()});
        }
    }
    return out;
}

}  // namespace ecograde
