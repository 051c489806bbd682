#include <doctest.h>

#include <cmath>
#include <random>

#include "ecograde/core/error.hpp"
#include "ecograde/score/engine.hpp"
#include "ecograde/score/factors.hpp"

using namespace ecograde;

TEST_CASE("consumption factor") {
    CHECK(consumption_factor(0.0) == 1.0);
    CHECK(consumption_factor(250.0) == 0.5);
    CHECK(consumption_factor(500.0) == 0.0);
    CHECK(consumption_factor(900.0) == 0.0);
    ScoreCalibration c;
    c.kwh_floor = 100.0;
    c.kwh_cap = 300.0;
    CHECK(consumption_factor(50.0, c) == 1.0);
    CHECK(consumption_factor(200.0, c) == 0.5);
}

TEST_CASE("efficiency factor") {
    std::array<std::optional<double>, 9> all{};
    all.fill(0.75);
    CHECK(efficiency_factor(all) == 0.75);
    std::array<std::optional<double>, 9> two{};
    two[0] = 1.0;
    two[5] = 0.5;
    CHECK(efficiency_factor(two) == 0.75);
    CHECK_FALSE(efficiency_factor(std::array<std::optional<double>, 9>{}).has_value());
}

TEST_CASE("supplier factor") {
    CHECK(supplier_factor(Tariff{1.0, false}) == 1.0);
    CHECK(supplier_factor(Tariff{1.0, true}) == 0.5);
    CHECK(supplier_factor(Tariff{0.4, false}) == 0.4);
    CHECK_FALSE(supplier_factor(std::nullopt).has_value());
    CHECK_THROWS_AS(supplier_factor(Tariff{1.2, false}), Error);
}

TEST_CASE("transport factor") {
    CHECK(transport_factor(0.0) == 1.0);
    CHECK(transport_factor(0.5) == 0.5);
    CHECK(transport_factor(1.0) == 0.0);
    CHECK(transport_factor(3.0) == 0.0);
}

TEST_CASE("leaf scale") {
    CHECK(to_leaf_scale(0.0, 9.0) == 0.0);
    CHECK(to_leaf_scale(1.0, 9.0) == 5.0);
    // 5 ln 5.5 / ln 10, evaluated to 30 digits with mpmath.
    CHECK(to_leaf_scale(0.5, 9.0) == doctest::Approx(3.70181344747121922768).epsilon(1e-14));
    CHECK(to_leaf_scale(0.3, 1e-9) == doctest::Approx(1.5).epsilon(1e-8));
    CHECK_THROWS_AS(to_leaf_scale(1.01, 9.0), Error);
    CHECK_THROWS_AS(to_leaf_scale(0.5, 0.0), Error);
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        double v = to_leaf_scale(i / 1000.0, 9.0);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("overall score is the mean of present factors") {
    CHECK(ecograde::ecograde({3.0, std::nullopt, std::nullopt, std::nullopt}) == 3.0);
    CHECK(ecograde::ecograde({2.0, std::nullopt, 4.0, std::nullopt}) == 3.0);
    CHECK(ecograde::ecograde({1.0, 2.0, 3.0, 4.0}) == 2.5);
    CHECK(ecograde::ecograde({1.0, 2.0, 3.0, 4.0}, {3.0, 1.0, 0.0, 0.0}) == 1.25);
    CHECK_THROWS_AS(ecograde::ecograde({}), Error);
}

TEST_CASE("co2 arithmetic") {
    ConversionFactors f;
    f.electricity_kg_per_kwh = 0.2;
    Co2Estimate e = co2_estimate({100.0, 100.0, 100.0}, 50.0, f, FuelMix::electricity_only());
    CHECK(e.avg == 1.0);
    CHECK(e.low == 1.0);
    CHECK(e.high == 1.0);
    Co2Estimate r = co2_estimate({150.0, 100.0, 200.0}, 50.0, f, FuelMix::electricity_only());
    CHECK(r.low == 1.0);
    CHECK(r.avg == 1.5);
    CHECK(r.high == 2.0);
    CHECK_THROWS_AS(co2_estimate({100, 100, 100}, 0.0, f, FuelMix::electricity_only()), Error);

    f.gas_kg_per_kwh = 0.18;
    CHECK(effective_factor(f, FuelMix::gas_heated()) == doctest::Approx(0.19));
    f.gas_kg_per_kwh.reset();
    CHECK_THROWS_AS(effective_factor(f, FuelMix::gas_heated()), Error);
    CHECK(effective_factor(f, FuelMix::electricity_only()) == 0.2);
}

TEST_CASE("calibration JSON") {
    auto c = Json::parse(R"({"kwh_cap": 400, "leaf_curve_beta": 4, "weights": {"transport": 2},
                             "leaf_rounding": "truncate"})").get<ScoreCalibration>();
    CHECK(c.kwh_cap == 400.0);
    CHECK(c.beta(Factor::Supplier) == 4.0);
    CHECK(c.weights[index_of(Factor::Transport)] == 2.0);
    CHECK(c.weights[index_of(Factor::Consumption)] == 1.0);
    CHECK(c.leaf_rounding == LeafRounding::Truncate);
    CHECK(Json(c).get<ScoreCalibration>().kwh_cap == 400.0);
    ScoreCalibration bad;
    bad.kwh_cap = bad.kwh_floor;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("beta calibration hits the target median") {
    std::vector<double> inputs = {0.05, 0.1, 0.15, 0.2, 0.3};
    double beta = calibrate_beta(inputs);
    CHECK(to_leaf_scale(0.15, beta) == doctest::Approx(2.5).epsilon(1e-6));
}

namespace {

EpcRecord flat(std::string addr, double area, double kwh, EfficiencyBand band) {
    EpcRecord r;
    r.address_key = std::move(addr);
    r.postcode = "SE1 1AA";
    r.floor_area = area;
    r.kwh_per_m2 = kwh;
    r.lodgement_date = {2021, 1, 1};
    r.headline_rating = 'D';
    for (EpcAttribute a : kAllAttributes) r.bands[index_of(a)] = band;
    return r;
}

Listing listing(std::string addr) {
    Listing l;
    l.id = "L1";
    l.address_key = std::move(addr);
    l.postcode = "SE1 1AA";
    l.latitude = 51.5;
    l.longitude = -0.1;
    l.city = "London";
    l.bedrooms = 1;
    return l;
}

}  // namespace

TEST_CASE("direct listing hand computation") {
    EpcIndex index({flat("1 A ST", 50.0, 250.0, EfficiencyBand::Average)});
    auto table = BedroomLookupTable::defaults();
    ScoringContext ctx;
    ctx.index = &index;
    ctx.bedrooms = &table;
    ctx.conversion.electricity_kg_per_kwh = 0.2;
    auto r = score_listing(listing("1 A ST"), ctx);
    CHECK(r.provenance.kind == ProvenanceKind::Direct);
    CHECK(r.factor_inputs[0] == 0.5);
    CHECK(r.factor_inputs[1] == 0.5);
    CHECK(r.overall == doctest::Approx(3.70181344747122).epsilon(1e-13));
    CHECK(r.leaves == 4);
    CHECK(r.missing_factors == std::vector<Factor>{Factor::Supplier, Factor::Transport});
    REQUIRE(r.co2);
    CHECK(r.co2->avg == doctest::Approx(2.5));
    CHECK(r.co2->low == r.co2->high);
}

TEST_CASE("interpolated listing carries a range and neighbor count") {
    EpcIndex index({flat("1 A ST", 40.0, 200.0, EfficiencyBand::Poor),
                    flat("2 A ST", 44.0, 220.0, EfficiencyBand::Average),
                    flat("3 A ST", 48.0, 260.0, EfficiencyBand::Good)});
    auto table = BedroomLookupTable::defaults();
    ScoringContext ctx;
    ctx.index = &index;
    ctx.bedrooms = &table;
    auto r = score_listing(listing("9 A ST"), ctx);
    CHECK(r.provenance.kind == ProvenanceKind::Interpolated);
    CHECK(r.provenance.n_neighbors == 3);
    REQUIRE(r.co2);
    CHECK(r.co2->low < r.co2->avg);
    CHECK(r.co2->avg < r.co2->high);
    CHECK(r.floor_area == doctest::Approx(44.0));
    CHECK(*r.factor_inputs[1] == doctest::Approx(0.5));

    ListingOverrides o;
    o.floor_area = 88.0;
    auto doubled = score_listing(listing("9 A ST"), ctx, o);
    CHECK(doubled.co2->avg == doctest::Approx(2.0 * r.co2->avg));
}

TEST_CASE("meter readings replace certificate consumption") {
    EpcIndex index({flat("1 A ST", 50.0, 250.0, EfficiencyBand::Average)});
    ScoringContext ctx;
    ctx.index = &index;
    Listing l = listing("1 A ST");
    l.meter_kwh_per_m2 = 100.0;
    auto r = score_listing(l, ctx);
    CHECK(r.provenance.kind == ProvenanceKind::Meter);
    CHECK(r.factor_inputs[0] == doctest::Approx(0.8));
}

TEST_CASE("listing with no data is not scored") {
    ScoringContext ctx;
    Listing l = listing("nowhere");
    CHECK_THROWS_AS(score_listing(l, ctx), Error);
    l.tariff = Tariff{0.5, false};
    auto r = score_listing(l, ctx);
    CHECK(r.provenance.kind == ProvenanceKind::None);
    CHECK(r.overall == doctest::Approx(to_leaf_scale(0.5, 9.0)));
    CHECK_FALSE(r.co2);

    auto batch = score_all(std::vector<Listing>{listing("nowhere"), l}, ctx);
    CHECK(batch.reports.size() == 1);
    REQUIRE(batch.diagnostics.size() == 1);
    CHECK(batch.diagnostics[0].reason.rfind("no_score", 0) == 0);
}

TEST_CASE("what-if improves the overall score") {
    EpcIndex index({flat("1 A ST", 50.0, 250.0, EfficiencyBand::Poor)});
    ScoringContext ctx;
    ctx.index = &index;
    auto r = score_listing(listing("1 A ST"), ctx);
    double better = what_if_attribute(r, EpcAttribute::Walls, 0.5, ctx.calibration);
    CHECK(better > r.overall);
    CHECK(what_if_attribute(r, EpcAttribute::Walls, 0.25, ctx.calibration) == doctest::Approx(r.overall));
}

TEST_CASE("monotone in every factor on random inputs") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ScoreCalibration calib;
    for (int i = 0; i < 2000; ++i) {
        FactorScores inputs{};
        for (auto& x : inputs) {
            if (u(gen) < 0.8) x = u(gen);
        }
        if (!inputs[0]) inputs[0] = u(gen);
        EcoGradeReport base, up;
        finalize_scores(base, inputs, calib);
        std::size_t k = static_cast<std::size_t>(u(gen) * 4) % 4;
        if (!inputs[k]) continue;
        FactorScores raised = inputs;
        raised[k] = std::min(1.0, *inputs[k] + 0.01 + u(gen) * (1.0 - *inputs[k]));
        if (*raised[k] <= *inputs[k]) continue;
        finalize_scores(up, raised, calib);
        CHECK(up.overall > base.overall);
    }
}
