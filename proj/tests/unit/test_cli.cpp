#include <doctest.h>

#include <httplib.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "ecograde/cli/commands.hpp"
#include "ecograde/cli/config.hpp"
#include "ecograde/core/error.hpp"
#include "ecograde/core/serialize.hpp"
#include "ecograde/score/factors.hpp"

namespace fs = std::filesystem;
using namespace ecograde;

namespace {

const fs::path kFixture = fs::path(ECOGRADE_TEST_DATA_DIR) / "fixture_city";

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("ecograde_cli_" + std::to_string(::getpid()) + "_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ecograde");
    return run_cli(args);
}

std::string calibration_file(const fs::path& dir) {
    fs::path p = dir / "calibration.json";
    write_file(p, Json(ScoreCalibration{}).dump());
    return p.string();
}

std::map<std::string, std::string> tree(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = read_file(e.path());
    }
    return out;
}

fs::path only_subdir(const fs::path& dir) {
    std::vector<fs::path> subs;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_directory()) subs.push_back(e.path());
    }
    REQUIRE(subs.size() == 1);
    return subs.front();
}

struct EpochPin {
    EpochPin() { ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1); }
    ~EpochPin() { ::unsetenv("SOURCE_DATE_EPOCH"); }
};

}  // namespace

TEST_CASE("ingest fixture city counts match its manifest") {
    auto dir = scratch("fixture");
    auto expected = Json::parse(read_file(kFixture / "expected.json"));
    REQUIRE(cli({"ingest", (kFixture / "epc.csv").string(), "--listings", (kFixture / "listings.jsonl").string(),
                 "--out", (dir / "store").string()}) == kExitOk);
    auto manifest = Json::parse(read_file(dir / "store" / "manifest.json"));
    for (const char* key : {"parsed", "parse_diagnostics", "rejected", "deduped", "kept", "listings"}) {
        CHECK_MESSAGE(manifest["parameters"][key] == expected[key], key);
    }
    CHECK(manifest["command"] == "ingest");
    CHECK(manifest["inputs"].size() == 2);
    CHECK(manifest["tool_version"] == ECOGRADE_VERSION);

    REQUIRE(cli({"score", "--store", (dir / "store").string(), "--calib", calibration_file(dir), "--out",
                 (dir / "scores").string()}) == kExitOk);
    auto scores = Json::parse(read_file(dir / "scores" / "manifest.json"));
    CHECK(scores["parameters"]["scored"] == expected["scored"]);
    CHECK(scores["parameters"]["unscored"] == expected["unscored"]);

    std::ifstream in(dir / "scores" / "reports.jsonl");
    auto reports = read_json_lines<EcoGradeReport>(in);
    REQUIRE(reports.size() == 2);
    // FX-1: kWh 250 → 0.5, all bands good → 0.75, renewable 0.6 on gas → 0.3.
    CHECK(reports[0].listing_id == "FX-1");
    CHECK(reports[0].overall == doctest::Approx(3.6631101934459145).epsilon(1e-14));
    CHECK(reports[0].leaves == 4);
    CHECK(reports[0].co2->avg == doctest::Approx(2.4350625).epsilon(1e-14));
    // FX-2: kWh 200 → 0.6, all bands average → 0.5, no tariff.
    CHECK(reports[1].listing_id == "FX-2");
    CHECK(reports[1].overall == doctest::Approx(3.866356658695327).epsilon(1e-14));
    CHECK(reports[1].co2->avg == doctest::Approx(2.48484).epsilon(1e-14));
    CHECK(reports[1].missing_factors == std::vector<Factor>{Factor::Supplier, Factor::Transport});

    auto diagnostics = read_file(dir / "scores" / "diagnostics.csv");
    CHECK(diagnostics.find("FX-3,no_score") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("ingest of empty input exits 0 with zero counts") {
    auto dir = scratch("empty");
    write_file(dir / "empty.csv", "");
    CHECK(cli({"ingest", (dir / "empty.csv").string(), "--out", (dir / "store").string()}) == kExitOk);
    auto manifest = Json::parse(read_file(dir / "store" / "manifest.json"));
    CHECK(manifest["parameters"]["parsed"] == 0);
    CHECK(manifest["parameters"]["kept"] == 0);
    CHECK(manifest["parameters"]["rejected"] == 0);
    CHECK(cli({"ingest", "--out", (dir / "store2").string()}) == kExitOk);
    fs::remove_all(dir);
}

TEST_CASE("configuration errors exit 2") {
    auto dir = scratch("config");
    write_file(dir / "rules.json", "{\"min_plausible_area\": ");
    CHECK(cli({"ingest", (kFixture / "epc.csv").string(), "--rules", (dir / "rules.json").string(), "--out",
               (dir / "store").string()}) == kExitConfig);
    write_file(dir / "rules.json", R"({"min_plausible_area": 600, "max_plausible_area": 500})");
    CHECK(cli({"ingest", (kFixture / "epc.csv").string(), "--rules", (dir / "rules.json").string(), "--out",
               (dir / "store").string()}) == kExitConfig);

    REQUIRE(cli({"ingest", (kFixture / "epc.csv").string(), "--out", (dir / "store").string()}) == kExitOk);
    CHECK(cli({"score", "--store", (dir / "store").string(), "--calib", (dir / "missing.json").string(), "--out",
               (dir / "scores").string()}) == kExitConfig);
    CHECK(cli({"score", "--store", (dir / "store").string(), "--out", (dir / "scores").string()}) == kExitConfig);
    write_file(dir / "bad_calib.json", R"({"kwh_cap": -1})");
    CHECK(cli({"score", "--store", (dir / "store").string(), "--calib", (dir / "bad_calib.json").string(),
               "--out", (dir / "scores").string()}) == kExitConfig);
    CHECK(cli({"validate", "--cities", "11", "--out", (dir / "v").string()}) == kExitConfig);
    CHECK(cli({"validate", "--seeds", "1,x", "--out", (dir / "v").string()}) == kExitConfig);
    CHECK(cli({"frobnicate"}) == kExitConfig);
    CHECK(cli({"--config", (dir / "nope.json").string(), "validate", "--out", (dir / "v").string()}) ==
          kExitConfig);
    fs::remove_all(dir);
}

TEST_CASE("runtime errors exit 1") {
    auto dir = scratch("runtime");
    CHECK(cli({"ingest", (dir / "absent.csv").string(), "--out", (dir / "store").string()}) == kExitRuntime);
    CHECK(cli({"score", "--store", (dir / "nowhere").string(), "--calib", calibration_file(dir), "--out",
               (dir / "scores").string()}) == kExitRuntime);
    fs::remove_all(dir);
}

TEST_CASE("score reruns are byte-identical") {
    EpochPin pin;
    auto dir = scratch("rerun");
    REQUIRE(cli({"ingest", (kFixture / "epc.csv").string(), "--listings", (kFixture / "listings.jsonl").string(),
                 "--out", (dir / "store").string()}) == kExitOk);
    auto calib = calibration_file(dir);
    REQUIRE(cli({"score", "--store", (dir / "store").string(), "--calib", calib, "--out", (dir / "a").string()}) ==
            kExitOk);
    REQUIRE(cli({"score", "--store", (dir / "store").string(), "--calib", calib, "--out", (dir / "b").string()}) ==
            kExitOk);
    auto a = tree(dir / "a");
    auto b = tree(dir / "b");
    CHECK(a.size() == 7);
    CHECK(a == b);
    fs::remove_all(dir);
}

TEST_CASE("validate with a fixed seed reproduces its summary") {
    EpochPin pin;
    auto dir = scratch("validate");
    for (const char* run : {"a", "b"}) {
        REQUIRE(cli({"validate", "--seeds", "7", "--cities", "2", "--addresses", "300", "--out",
                     (dir / run).string()}) == kExitOk);
    }
    auto a = only_subdir(dir / "a");
    auto b = only_subdir(dir / "b");
    CHECK(a.filename() == "run_7_20231114T221320Z");
    CHECK(read_file(a / "summary.json") == read_file(b / "summary.json"));
    auto ma = Json::parse(read_file(a / "manifest.json"));
    auto mb = Json::parse(read_file(b / "manifest.json"));
    CHECK(ma["parameters"]["summary_hash"] == mb["parameters"]["summary_hash"]);
    CHECK(ma["seeds"] == Json::array({7}));
    CHECK(tree(a) == tree(b));
    fs::remove_all(dir);
}

TEST_CASE("emitted corpus feeds ingest and score") {
    auto dir = scratch("corpus");
    REQUIRE(cli({"validate", "--seeds", "3", "--cities", "1", "--addresses", "150", "--emit-corpus", "--out",
                 dir.string()}) == kExitOk);
    fs::path corpus = only_subdir(dir) / "corpus";
    REQUIRE(cli({"ingest", (corpus / "epc_export.csv").string(), "--listings", (corpus / "listings.jsonl").string(),
                 "--transport", (corpus / "transport").string(), "--bookings", (corpus / "bookings.jsonl").string(),
                 "--clients", (corpus / "clients.jsonl").string(), "--suppliers",
                 (corpus / "suppliers.jsonl").string(), "--out", (dir / "store").string()}) == kExitOk);
    REQUIRE(cli({"score", "--store", (dir / "store").string(), "--calib", calibration_file(dir), "--out",
                 (dir / "store").string()}) == kExitOk);
    auto manifest = Json::parse(read_file(dir / "store" / "manifest.json"));
    CHECK(manifest["parameters"]["scored"].get<int>() > 100);
    fs::remove_all(dir);
}

TEST_CASE("serve exits 1 when the port is taken") {
    auto dir = scratch("serve");
    httplib::Server blocker;
    int port = blocker.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    CHECK(cli({"serve", "--store", dir.string(), "--host", "127.0.0.1", "--port", std::to_string(port)}) ==
          kExitRuntime);
    CHECK(cli({"serve"}) == kExitConfig);
    fs::remove_all(dir);
}

TEST_CASE("config file loading") {
    auto dir = scratch("cfg");
    write_file(dir / "beds.json", R"({"Leeds": [{"area_low": 0, "area_high": 40, "bedrooms": 0},
                                                 {"area_low": 40, "area_high": 1000, "bedrooms": 1}]})");
    write_file(dir / "cfg.json", R"({
        "version": 1,
        "calibration": {"kwh_cap": 400},
        "matching": {"min_similar": 5},
        "bedroom_table": "beds.json",
        "service": {"host": "0.0.0.0", "port": 9000}
    })");
    AppConfig cfg = load_config(dir / "cfg.json");
    CHECK(cfg.calibration.kwh_cap == 400.0);
    CHECK(cfg.min_similar == 5);
    CHECK(cfg.service.port == 9000);
    ::setenv("ECOGRADE_PORT", "9100", 1);
    apply_env_overrides(cfg.service);
    ::unsetenv("ECOGRADE_PORT");
    CHECK(cfg.service.port == 9100);

    write_file(dir / "v2.json", R"({"version": 2})");
    CHECK_THROWS_AS(load_config(dir / "v2.json"), Error);
    write_file(dir / "typo.json", R"({"version": 1, "calibraton": {}})");
    CHECK_THROWS_AS(load_config(dir / "typo.json"), Error);
    fs::remove_all(dir);
}
