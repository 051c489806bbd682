#include <doctest.h>

#include <filesystem>

#include "ecograde/core/error.hpp"
#include "ecograde/match/epc_index.hpp"
#include "ecograde/match/interpolate.hpp"

using namespace ecograde;

namespace {

EpcRecord cert(std::string addr, std::string pc, double area, double kwh, EfficiencyBand walls) {
    EpcRecord r;
    r.address_key = std::move(addr);
    r.postcode = std::move(pc);
    r.floor_area = area;
    r.kwh_per_m2 = kwh;
    r.lodgement_date = {2020, 1, 1};
    r.headline_rating = 'D';
    r.bands[index_of(EpcAttribute::Walls)] = walls;
    r.bands[index_of(EpcAttribute::Lighting)] = EfficiencyBand::Good;
    return r;
}

Listing listing(std::string addr, std::string pc, int beds) {
    Listing l;
    l.id = "L-" + addr;
    l.address_key = std::move(addr);
    l.postcode = std::move(pc);
    l.city = "London";
    l.bedrooms = beds;
    return l;
}

}  // namespace

TEST_CASE("index lookups") {
    EpcIndex index({cert("2 A ST", "SE1 1AA", 45, 200, EfficiencyBand::Poor),
                    cert("1 A ST", "SE1 1AA", 45, 210, EfficiencyBand::Poor),
                    cert("1 A ST", "SE1 2BB", 45, 220, EfficiencyBand::Poor),
                    cert("9 B ST", "SE2 1AA", 45, 230, EfficiencyBand::Poor)});
    CHECK(index.size() == 4);
    REQUIRE(index.find("1 A ST", "SE1 2BB"));
    CHECK(index.find("1 A ST", "SE1 2BB")->kwh_per_m2 == 220.0);
    CHECK_FALSE(index.find("3 A ST", "SE1 1AA"));
    CHECK(index.by_postcode("SE1 1AA").size() == 2);
    CHECK(index.by_outward("SE1").size() == 3);
    CHECK(index.by_outward("SE9").empty());
    CHECK_THROWS_AS(EpcIndex({cert("1", "SE1 1AA", 45, 1, EfficiencyBand::Poor),
                              cert("1", "SE1 1AA", 46, 1, EfficiencyBand::Poor)}),
                    Error);
}

TEST_CASE("index snapshot round trip") {
    EpcIndex index({cert("2 A ST", "SE1 1AA", 45, 200, EfficiencyBand::Poor),
                    cert("1 A ST", "SE1 1AA", 45, 210, EfficiencyBand::Good)});
    auto path = std::filesystem::temp_directory_path() / "ecograde_index_test.json";
    index.save_snapshot(path);
    EpcIndex back = EpcIndex::load_snapshot(path);
    CHECK(back.records() == index.records());
    CHECK(back.fingerprint() == index.fingerprint());
    std::filesystem::remove(path);
}

TEST_CASE("neighbors in the same postcode and bedroom band") {
    auto table = BedroomLookupTable::defaults();
    // London: 1-bed is [37, 52).
    EpcIndex index({cert("1 A ST", "SE1 1AA", 40, 200, EfficiencyBand::Poor),
                    cert("2 A ST", "SE1 1AA", 45, 220, EfficiencyBand::Average),
                    cert("3 A ST", "SE1 1AA", 50, 240, EfficiencyBand::Good),
                    cert("4 A ST", "SE1 1AA", 80, 100, EfficiencyBand::VeryGood),
                    cert("5 A ST", "SE1 2BB", 41, 300, EfficiencyBand::VeryPoor)});
    auto n = find_neighbors(listing("7 A ST", "SE1 1AA", 1), index, table, 3);
    CHECK(n.records.size() == 3);
    CHECK_FALSE(n.widened);

    auto wide = find_neighbors(listing("7 A ST", "SE1 1AA", 1), index, table, 4);
    CHECK(wide.widened);
    CHECK(wide.records.size() == 4);

    // The listing's own certificate is not its neighbor.
    auto self = find_neighbors(listing("1 A ST", "SE1 1AA", 1), index, table, 2);
    for (const auto& r : self.records) CHECK(r.address_key != "1 A ST");

    CHECK_THROWS_AS(find_neighbors(listing("7 A ST", "SE1 1AA", 5), index, table, 1), Error);
    Listing no_beds = listing("7 A ST", "SE1 1AA", 1);
    no_beds.bedrooms.reset();
    CHECK_THROWS_AS(find_neighbors(no_beds, index, table, 1), Error);
    Listing elsewhere = listing("7 A ST", "SE1 1AA", 1);
    elsewhere.city = "Atlantis";
    try {
        find_neighbors(elsewhere, index, table, 1);
        FAIL("expected unknown city");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownCity);
    }
}

TEST_CASE("interpolation means and extremes") {
    std::vector<EpcRecord> n = {cert("1", "SE1 1AA", 40, 200, EfficiencyBand::Poor),
                                cert("2", "SE1 1AA", 44, 220, EfficiencyBand::Average),
                                cert("3", "SE1 1AA", 48, 260, EfficiencyBand::Good)};
    n[2].bands[index_of(EpcAttribute::Lighting)].reset();
    n[0].gas_main_heat = true;
    auto r = interpolate(n);
    CHECK(r.n_neighbors == 3);
    CHECK(r.kwh_mean == doctest::Approx(680.0 / 3.0));
    CHECK(r.kwh_min == 200.0);
    CHECK(r.kwh_max == 260.0);
    CHECK(r.kwh_sd == doctest::Approx(std::sqrt(((200 - 680.0 / 3) * (200 - 680.0 / 3) +
                                                 (220 - 680.0 / 3) * (220 - 680.0 / 3) +
                                                 (260 - 680.0 / 3) * (260 - 680.0 / 3)) / 2.0)));
    CHECK(r.area_mean == doctest::Approx(44.0));
    CHECK(r.feature_means[index_of(EpcAttribute::Walls)] == doctest::Approx(0.5));
    CHECK(r.feature_means[index_of(EpcAttribute::Lighting)] == 0.75);
    CHECK_FALSE(r.feature_means[index_of(EpcAttribute::Roof)].has_value());
    CHECK(r.gas_fraction == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(interpolate({}), Error);
}

TEST_CASE("identical neighbors reproduce the direct values exactly") {
    for (int n = 1; n <= 64; ++n) {
        EpcRecord r = cert("x", "SE1 1AA", 47.3, 187.1, EfficiencyBand::Poor);
        r.bands[index_of(EpcAttribute::Roof)] = EfficiencyBand::VeryGood;
        std::vector<EpcRecord> same(static_cast<std::size_t>(n), r);
        auto out = interpolate(same);
        CHECK(out.kwh_mean == r.kwh_per_m2);
        CHECK(out.kwh_min == r.kwh_per_m2);
        CHECK(out.kwh_max == r.kwh_per_m2);
        CHECK(out.kwh_sd == 0.0);
        CHECK(out.area_mean == r.floor_area);
        CHECK(out.feature_means == to_scores(r.bands));
    }
}
