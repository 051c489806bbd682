#include "ecograde/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <signal.h>
#include <unistd.h>

#include <CLI11.hpp>

#include "ecograde/cli/config.hpp"
#include "ecograde/cli/log.hpp"
#include "ecograde/core/error.hpp"
#include "ecograde/core/hash.hpp"
#include "ecograde/ingest/csv.hpp"
#include "ecograde/ingest/epc_ingest.hpp"
#include "ecograde/match/epc_index.hpp"
#include "ecograde/score/engine.hpp"
#include "ecograde/service/api.hpp"
#include "ecograde/service/corpus.hpp"
#include "ecograde/service/server.hpp"
#include "ecograde/service/store.hpp"
#include "ecograde/stats/compare.hpp"
#include "ecograde/validate/run.hpp"

namespace fs = std::filesystem;

namespace ecograde {

Json to_json(const RunManifest& m) {
    auto pairs = [](const std::vector<std::pair<std::string, std::string>>& items) {
        Json out = Json::array();
        for (const auto& [path, hash] : items) out.push_back({{"path", path}, {"hash", hash}});
        return out;
    };
    return Json{{"command", m.command},
                {"config_path", m.config_path ? Json(*m.config_path) : Json(nullptr)},
                {"inputs", pairs(m.inputs)},
                {"seeds", m.seeds},
                {"parameters", m.parameters},
                {"tool_version", m.tool_version},
                {"started_at", m.started_at},
                {"finished_at", m.finished_at},
                {"outputs", pairs(m.outputs)}};
}

std::string hash_path(const fs::path& path) {
    if (!fs::is_directory(path)) {
        return content_hash(read_file(path));
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(path)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::uint64_t h = fnv1a64("");
    for (const auto& f : files) {
        h = fnv1a64(fs::relative(f, path).generic_string(), h);
        h = fnv1a64(read_file(f), h);
    }
    return hex64(h);
}

void write_manifest(const fs::path& dir, RunManifest manifest) {
    manifest.outputs.clear();
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path() != dir / "manifest.json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        manifest.outputs.emplace_back(fs::relative(f, dir).generic_string(), hash_path(f));
    }
    manifest.finished_at = iso_timestamp(now_epoch_seconds());
    write_file(dir / "manifest.json", to_json(manifest).dump(2) + "\n");
}

namespace {

struct CommonArgs {
    std::string config;
};

AppConfig resolve_config(const CommonArgs& common) {
    if (common.config.empty()) return AppConfig{};
    return load_config(common.config);
}

RunManifest start_manifest(std::string command, const CommonArgs& common) {
    RunManifest m;
    m.command = std::move(command);
    if (!common.config.empty()) {
        m.config_path = common.config;
        m.inputs.emplace_back(common.config, hash_path(common.config));
    }
    m.started_at = iso_timestamp(now_epoch_seconds());
    return m;
}

void require_input(const fs::path& path) {
    if (!fs::exists(path)) fail(ErrorCode::Io, "input not found: " + path.string());
}

template <typename T>
std::vector<T> read_lines_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
    try {
        return read_json_lines<T>(in);
    } catch (const Error& e) {
        fail(e.code(), path.string() + ": " + e.what());
    }
}

std::string lines_of(const auto& items) {
    std::ostringstream out;
    write_json_lines(out, items);
    return out.str();
}

// ---- ingest ---------------------------------------------------------------

struct IngestArgs {
    std::vector<std::string> sources;
    std::string rules;
    std::string listings;
    std::string transport;
    std::string bookings;
    std::string clients;
    std::string suppliers;
    std::string bedrooms;
    std::string out;
};

int cmd_ingest(const IngestArgs& args, const CommonArgs& common) {
    AppConfig cfg = resolve_config(common);
    RunManifest manifest = start_manifest("ingest", common);

    CleaningRules rules = cfg.cleaning;
    if (!args.rules.empty()) {
        require_input(args.rules);
        try {
            rules = parse_config_json(read_file(args.rules), args.rules).get<CleaningRules>();
            rules.validate();
        } catch (const Json::exception& e) {
            fail(ErrorCode::Config, args.rules + ": " + e.what());
        } catch (const Error& e) {
            fail(ErrorCode::Config, args.rules + ": " + e.what());
        }
        manifest.inputs.emplace_back(args.rules, hash_path(args.rules));
    }
    BedroomLookupTable bedrooms = cfg.bedrooms;
    if (!args.bedrooms.empty()) {
        require_input(args.bedrooms);
        try {
            bedrooms = parse_config_json(read_file(args.bedrooms), args.bedrooms).get<BedroomLookupTable>();
        } catch (const Json::exception& e) {
            fail(ErrorCode::Config, args.bedrooms + ": " + e.what());
        } catch (const Error& e) {
            fail(ErrorCode::Config, args.bedrooms + ": " + e.what());
        }
        manifest.inputs.emplace_back(args.bedrooms, hash_path(args.bedrooms));
    }

    std::vector<EpcRecord> parsed;
    std::ostringstream diagnostics;
    diagnostics << "source,row,reason\n";
    std::size_t n_diagnostics = 0;
    for (const auto& source : args.sources) {
        require_input(source);
        std::ifstream in(source, std::ios::binary);
        if (!in) fail(ErrorCode::Io, "cannot open " + source);
        const auto ext = fs::path(source).extension().string();
        ExportFormat format = (ext == ".jsonl" || ext == ".ndjson") ? ExportFormat::JsonLines : ExportFormat::Csv;
        ParseOutcome outcome = parse_epc_export(in, format);
        for (const auto& d : outcome.diagnostics) {
            diagnostics << csv_row({source, std::to_string(d.row), d.reason}) << '\n';
        }
        n_diagnostics += outcome.diagnostics.size();
        for (auto& r : outcome.records) parsed.push_back(std::move(r));
        manifest.inputs.emplace_back(source, hash_path(source));
    }
    const std::size_t n_parsed = parsed.size();
    CleanOutcome cleaned = clean_records(std::move(parsed), rules);
    const std::size_t n_clean = cleaned.kept.size();
    EpcIndex index(dedupe_by_address(std::move(cleaned.kept)));

    std::vector<Listing> listings;
    if (!args.listings.empty()) {
        require_input(args.listings);
        listings = read_lines_file<Listing>(args.listings);
        manifest.inputs.emplace_back(args.listings, hash_path(args.listings));
    }
    std::vector<Booking> bookings;
    if (!args.bookings.empty()) {
        require_input(args.bookings);
        bookings = read_lines_file<Booking>(args.bookings);
        manifest.inputs.emplace_back(args.bookings, hash_path(args.bookings));
    }
    auto read_ids = [&](const std::string& path) {
        std::set<std::string> ids;
        if (path.empty()) return ids;
        require_input(path);
        std::ifstream in(path, std::ios::binary);
        ids = read_id_lines(in);
        manifest.inputs.emplace_back(path, hash_path(path));
        return ids;
    };
    auto clients = read_ids(args.clients);
    auto suppliers = read_ids(args.suppliers);
    // Referential checks; throws on bookings for unknown listings.
    StoreData check(listings, {}, {}, bookings, clients, suppliers, cfg.calibration);

    const fs::path out(args.out);
    fs::create_directories(out);
    write_file(out / "epc_records.jsonl", lines_of(index.records()));
    std::ostringstream rejected;
    write_rejections_csv(rejected, cleaned.rejected);
    write_file(out / "rejected.csv", rejected.str());
    write_file(out / "parse_diagnostics.csv", diagnostics.str());
    index.save_snapshot(out / "index.snapshot.json");
    write_file(out / "listings.jsonl", lines_of(listings));
    write_file(out / "bookings.jsonl", lines_of(bookings));
    auto id_lines = [](const std::set<std::string>& ids) {
        std::string s;
        for (const auto& id : ids) s += Json{{"id", id}}.dump() + "\n";
        return s;
    };
    write_file(out / "clients.jsonl", id_lines(clients));
    write_file(out / "suppliers.jsonl", id_lines(suppliers));
    write_file(out / "bedroom_table.json", Json(bedrooms).dump(2) + "\n");
    write_file(out / "cleaning_rules.json", Json(rules).dump(2) + "\n");
    if (!args.transport.empty()) {
        require_input(args.transport);
        write_transport_dir(out / "transport", load_transport_dir(args.transport));
        manifest.inputs.emplace_back(args.transport, hash_path(args.transport));
    }

    const std::size_t n_rejected = cleaned.rejected.size();
    const std::size_t n_deduped = n_clean - index.size();
    manifest.parameters = {{"parsed", n_parsed},
                           {"parse_diagnostics", n_diagnostics},
                           {"rejected", n_rejected},
                           {"deduped", n_deduped},
                           {"kept", index.size()},
                           {"listings", listings.size()}};
    write_manifest(out, manifest);
    std::printf("parsed=%zu kept=%zu rejected=%zu deduped=%zu listings=%zu\n", n_parsed, index.size(), n_rejected,
                n_deduped, listings.size());
    log_event("info", "ingest.done", manifest.parameters);
    return kExitOk;
}

// ---- score ----------------------------------------------------------------

struct ScoreArgs {
    std::string store;
    std::string calib;
    std::string out;
};

int cmd_score(const ScoreArgs& args, const CommonArgs& common) {
    AppConfig cfg = resolve_config(common);
    RunManifest manifest = start_manifest("score", common);

    if (!fs::exists(args.calib)) fail(ErrorCode::Config, "calibration file not found: " + args.calib);
    Json calib_json = parse_config_json(read_file(args.calib), args.calib);
    ScoreCalibration calibration;
    ConversionFactors conversion = cfg.conversion;
    try {
        // Either a bare calibration object or a full config file.
        if (calib_json.contains("calibration")) {
            calibration = calib_json.at("calibration").get<ScoreCalibration>();
            if (calib_json.contains("conversion")) conversion = calib_json.at("conversion").get<ConversionFactors>();
        } else {
            calibration = calib_json.get<ScoreCalibration>();
        }
        calibration.validate();
        conversion.validate();
    } catch (const Json::exception& e) {
        fail(ErrorCode::Config, args.calib + ": " + e.what());
    } catch (const Error& e) {
        fail(ErrorCode::Config, args.calib + ": " + e.what());
    }
    manifest.inputs.emplace_back(args.calib, hash_path(args.calib));

    const fs::path store(args.store);
    require_input(store / "index.snapshot.json");
    require_input(store / "listings.jsonl");
    EpcIndex index = EpcIndex::load_snapshot(store / "index.snapshot.json");
    auto listings = read_lines_file<Listing>(store / "listings.jsonl");
    BedroomLookupTable bedrooms = cfg.bedrooms;
    if (fs::exists(store / "bedroom_table.json")) {
        bedrooms = parse_config_json(read_file(store / "bedroom_table.json"), "bedroom_table.json")
                       .get<BedroomLookupTable>();
    }
    TransportData transport;
    if (fs::exists(store / "transport")) transport = load_transport_dir(store / "transport");
    manifest.inputs.emplace_back(store.string(), hash_path(store));

    ScoringContext ctx;
    ctx.index = &index;
    ctx.bedrooms = &bedrooms;
    ctx.transport = &transport;
    ctx.calibration = calibration;
    ctx.conversion = conversion;
    ctx.min_similar = cfg.min_similar;
    BatchScores batch = score_all(listings, ctx);
    BaselineSet baselines = build_baselines(batch.reports);

    const fs::path out(args.out);
    fs::create_directories(out);
    write_file(out / "reports.jsonl", lines_of(batch.reports));
    std::ostringstream diag;
    diag << "listing_id,reason\n";
    for (const auto& d : batch.diagnostics) diag << csv_row({d.listing_id, d.reason}) << '\n';
    write_file(out / "diagnostics.csv", diag.str());
    std::ostringstream base;
    write_baselines_csv(base, baselines.baselines);
    write_file(out / "baselines.csv", base.str());
    std::ostringstream base_diag;
    base_diag << "city,bed_type,reason\n";
    for (const auto& d : baselines.diagnostics) {
        base_diag << csv_row({d.city, std::to_string(d.bed_type), d.reason}) << '\n';
    }
    write_file(out / "baseline_diagnostics.csv", base_diag.str());
    write_file(out / "calibration.json", Json(calibration).dump(2) + "\n");
    write_file(out / "conversion.json", Json(conversion).dump(2) + "\n");

    for (const auto& d : batch.diagnostics) {
        log_event("warn", "score.unscored", {{"listing_id", d.listing_id}, {"reason", d.reason}});
    }
    manifest.parameters = {{"scored", batch.reports.size()},
                           {"unscored", batch.diagnostics.size()},
                           {"baselines", baselines.baselines.size()},
                           {"snapshot", index.fingerprint()}};
    write_manifest(out, manifest);
    std::printf("scored=%zu unscored=%zu baselines=%zu\n", batch.reports.size(), batch.diagnostics.size(),
                baselines.baselines.size());
    log_event("info", "score.done", manifest.parameters);
    return kExitOk;
}

// ---- validate -------------------------------------------------------------

struct ValidateArgs {
    std::vector<std::uint64_t> seeds = {20240101};
    int cities = 10;
    int addresses = 1000;
    double inject_shift = 0.0;
    std::string out;
    bool emit_corpus = false;
};

std::string compact_timestamp(long long epoch) {
    std::string iso = iso_timestamp(epoch);
    iso.erase(std::remove_if(iso.begin(), iso.end(), [](char c) { return c == '-' || c == ':'; }), iso.end());
    return iso;
}

int cmd_validate(const ValidateArgs& args, const CommonArgs& common) {
    AppConfig cfg = resolve_config(common);
    if (args.cities < 1 || args.cities > 10) fail(ErrorCode::Config, "--cities must be between 1 and 10");
    if (args.addresses < 0) fail(ErrorCode::Config, "--addresses must be non-negative");

    ValidationOptions options;
    options.inject_shift = args.inject_shift;
    options.min_similar = cfg.min_similar;
    options.calibration = cfg.calibration;
    options.conversion = cfg.conversion;
    options.cleaning = cfg.cleaning;
    options.bedrooms = cfg.bedrooms;

    int exit_code = kExitOk;
    for (std::uint64_t seed : args.seeds) {
        RunManifest manifest = start_manifest("validate", common);
        manifest.seeds = {seed};
        manifest.parameters = {{"cities", args.cities},
                               {"addresses", args.addresses},
                               {"inject_shift", args.inject_shift},
                               {"emit_corpus", args.emit_corpus}};
        auto cities = default_cities(seed, args.addresses);
        cities.resize(static_cast<std::size_t>(args.cities));
        ValidationReport report = run_validation(cities, options);
        Json summary = summary_json(report);
        const std::string summary_hash = content_hash(summary.dump());

        fs::path dir = fs::path(args.out) / ("run_" + std::to_string(seed) + "_" + compact_timestamp(now_epoch_seconds()));
        fs::create_directories(dir);
        write_validation_outputs(dir, report);
        if (args.emit_corpus) {
            write_corpus(dir / "corpus", build_synthetic_corpus(cities, options.bedrooms));
        }
        manifest.parameters["summary_hash"] = summary_hash;
        write_manifest(dir, manifest);

        double max_gap = 0.0;
        for (const auto& c : report.by_city) max_gap = std::max(max_gap, c.gap);
        std::printf("seed=%llu equivalent=%s mean_diff=%.6f p=%.3g max_city_gap=%.4f summary_hash=%s dir=%s\n",
                    static_cast<unsigned long long>(seed), report.tost.equivalent ? "true" : "false",
                    report.tost.mean_diff, std::max(report.tost.p_lower, report.tost.p_upper), max_gap,
                    summary_hash.c_str(), dir.string().c_str());
        for (const auto& d : report.diagnostics) log_event("warn", "validate.diagnostic", {{"detail", d}});
        log_event("info", "validate.done", {{"seed", seed}, {"equivalent", report.tost.equivalent}});
    }
    return exit_code;
}

// ---- serve ----------------------------------------------------------------

struct ServeArgs {
    std::string store;
    std::string scores;
    std::string host;
    int port = -1;
};

int cmd_serve(const ServeArgs& args, const CommonArgs& common) {
    AppConfig cfg = resolve_config(common);
    ServiceConfig service = cfg.service;
    apply_env_overrides(service);
    if (!args.host.empty()) service.host = args.host;
    if (args.port >= 0) service.port = args.port;
    fs::path store_dir = !args.store.empty() ? fs::path(args.store) : service.data_dir.value_or(fs::path());
    if (store_dir.empty()) fail(ErrorCode::Config, "no store: pass --store or set ECOGRADE_DATA_DIR");
    StorePaths paths{store_dir, args.scores.empty() ? store_dir : fs::path(args.scores)};

    // Block termination signals in every thread; the main thread waits for them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    sigset_t previous;
    pthread_sigmask(SIG_BLOCK, &signals, &previous);
    struct RestoreMask {
        sigset_t mask;
        ~RestoreMask() { pthread_sigmask(SIG_SETMASK, &mask, nullptr); }
    } restore{previous};

    Store store;
    Api api(store);
    HttpServer server(api);
    if (!server.bind(service.host, service.port)) {
        log_event("error", "serve.bind_failed", {{"host", service.host}, {"port", service.port}});
        return kExitRuntime;
    }
    std::printf("listening on %s:%d\n", service.host.c_str(), server.port());
    std::fflush(stdout);
    log_event("info", "serve.listening", {{"host", service.host}, {"port", server.port()}});

    std::thread http([&] { server.listen(); });
    int status = kExitOk;
    std::thread loader([&] {
        try {
            store.publish(load_store(paths));
            log_event("info", "serve.loaded", {{"snapshot", store.snapshot()->fingerprint()}});
        } catch (const Error& e) {
            log_event("error", "serve.load_failed", {{"code", to_string(e.code())}, {"detail", e.what()}});
            status = kExitRuntime;
            kill(getpid(), SIGTERM);
        }
    });
    int sig = 0;
    sigwait(&signals, &sig);
    log_event("info", "serve.stopping", {{"signal", sig}});
    server.stop();
    http.join();
    loader.join();
    return status;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
            fail(ErrorCode::Config, "--seeds expects comma-separated unsigned integers, got '" + item + "'");
        }
        seeds.push_back(v);
    }
    if (seeds.empty()) fail(ErrorCode::Config, "--seeds is empty");
    return seeds;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"EcoGrade: sustainability scoring for rental listings"};
    app.set_version_flag("--version", ECOGRADE_VERSION);
    app.require_subcommand(1);
    CommonArgs common;
    app.add_option("--config", common.config, "Configuration file (JSON)");

    IngestArgs ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Parse, clean, deduplicate and index certificate exports");
    ingest_cmd->add_option("sources", ingest.sources, "Certificate exports (.csv or .jsonl)");
    ingest_cmd->add_option("--rules", ingest.rules, "Cleaning rules (JSON)");
    ingest_cmd->add_option("--listings", ingest.listings, "Listings (JSON lines)");
    ingest_cmd->add_option("--transport", ingest.transport, "Transport directory (fixed.jsonl, snapshots/)");
    ingest_cmd->add_option("--bookings", ingest.bookings, "Corporate bookings (JSON lines)");
    ingest_cmd->add_option("--clients", ingest.clients, "Corporate client ids (JSON lines)");
    ingest_cmd->add_option("--suppliers", ingest.suppliers, "Supplier ids (JSON lines)");
    ingest_cmd->add_option("--bedrooms", ingest.bedrooms, "Floor area to bedroom table (JSON)");
    ingest_cmd->add_option("--out", ingest.out, "Store directory")->required();

    ScoreArgs score;
    auto* score_cmd = app.add_subcommand("score", "Score every listing in a store");
    score_cmd->add_option("--store", score.store, "Store directory written by ingest")->required();
    score_cmd->add_option("--calib", score.calib, "Calibration (JSON)")->required();
    score_cmd->add_option("--out", score.out, "Output directory")->required();

    ValidateArgs validate;
    std::string seeds_text = "20240101";
    auto* validate_cmd = app.add_subcommand("validate", "Interpolated versus direct scores on synthetic cities");
    validate_cmd->add_option("--seeds", seeds_text, "Comma-separated base seeds");
    validate_cmd->add_option("--cities", validate.cities, "Number of synthetic cities (1-10)");
    validate_cmd->add_option("--addresses", validate.addresses, "Listings per city");
    validate_cmd->add_option("--inject-shift", validate.inject_shift, "Shift added to interpolated scores");
    validate_cmd->add_option("--out", validate.out, "Output directory")->required();
    validate_cmd->add_flag("--emit-corpus", validate.emit_corpus, "Also write the synthetic corpus as ingest inputs");

    ServeArgs serve;
    auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API over a scored store");
    serve_cmd->add_option("--store", serve.store, "Store directory (or ECOGRADE_DATA_DIR)");
    serve_cmd->add_option("--scores", serve.scores, "Score output directory (defaults to the store)");
    serve_cmd->add_option("--host", serve.host, "Bind address");
    serve_cmd->add_option("--port", serve.port, "Port (0 picks a free one; or ECOGRADE_PORT)");

    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*ingest_cmd) return cmd_ingest(ingest, common);
        if (*score_cmd) return cmd_score(score, common);
        if (*validate_cmd) {
            validate.seeds = parse_seeds(seeds_text);
            return cmd_validate(validate, common);
        }
        if (*serve_cmd) return cmd_serve(serve, common);
    } catch (const Error& e) {
        log_event("error", "command.failed", {{"code", to_string(e.code())}, {"detail", e.what()}});
        return e.code() == ErrorCode::Config ? kExitConfig : kExitRuntime;
    } catch (const std::exception& e) {
        log_event("error", "command.failed", {{"code", "internal"}, {"detail", e.what()}});
        return kExitRuntime;
    }
    return kExitConfig;
}

}  // namespace ecograde
