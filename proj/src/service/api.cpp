#include "ecograde/service/api.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>

#include "ecograde/core/error.hpp"
#include "ecograde/score/engine.hpp"

namespace ecograde {

namespace {

constexpr std::string_view kPrefix = "/v1";

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < path.size()) {
        std::size_t j = path.find('/', i);
        if (j == std::string_view::npos) j = path.size();
        if (j > i) parts.emplace_back(path.substr(i, j - i));
        i = j + 1;
    }
    return parts;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

std::optional<long> parse_int(const std::string& text) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return v;
}

Json optional_number(const std::optional<double>& v) {
    return v ? Json(*v) : Json(nullptr);
}

Json listing_summary(const Listing& l, const EcoGradeReport* r) {
    Json j = {{"id", l.id},
              {"city", l.city},
              {"bedrooms", l.bedrooms ? Json(*l.bedrooms) : Json(nullptr)},
              {"overall", r ? Json(r->overall) : Json(nullptr)},
              {"leaves", r ? Json(r->leaves) : Json(nullptr)},
              {"provenance", r ? Json(to_string(r->provenance.kind)) : Json(nullptr)}};
    return j;
}

}  // namespace

void to_json(Json& j, const AdviceItem& a) {
    j = Json{{"attribute", attribute_key(a.attribute)},
             {"current_band", to_string(a.current_band)},
             {"expected_band", to_string(a.expected_band)},
             {"action", a.action},
             {"projected_overall", a.projected_overall},
             {"gain", a.gain}};
}

std::string_view advice_text(EpcAttribute attribute) noexcept {
    switch (attribute) {
        case EpcAttribute::HotWater: return "Insulate the hot water cylinder and fit a cylinder thermostat";
        case EpcAttribute::Floor: return "Add insulation beneath suspended floors";
        case EpcAttribute::Windows: return "Replace single glazing with double or triple glazed units";
        case EpcAttribute::Walls: return "Fill cavity walls or add internal or external wall insulation";
        case EpcAttribute::SecondaryHeating: return "Remove or replace inefficient secondary room heaters";
        case EpcAttribute::Roof: return "Top up loft insulation to at least 270 mm";
        case EpcAttribute::MainHeat: return "Upgrade to a condensing boiler or an air source heat pump";
        case EpcAttribute::MainHeatControl: return "Fit a programmer, room thermostat and thermostatic radiator valves";
        case EpcAttribute::Lighting: return "Switch all fixed fittings to low energy lighting";
    }
    return "";
}

std::vector<AdviceItem> advise(const EcoGradeReport& report, const ScoreCalibration& calib) {
    std::vector<AdviceItem> items;
    for (EpcAttribute a : kAllAttributes) {
        const auto& score = report.attribute_scores[index_of(a)];
        if (!score) continue;
        EfficiencyBand current = band_from_score(*score);
        if (current >= EfficiencyBand::Good) continue;
        AdviceItem item;
        item.attribute = a;
        item.current_band = current;
        item.expected_band = static_cast<EfficiencyBand>(static_cast<int>(current) + 1);
        item.action = std::string(advice_text(a));
        item.projected_overall = what_if_attribute(report, a, band_to_score(item.expected_band), calib);
        item.gain = item.projected_overall - report.overall;
        items.push_back(std::move(item));
    }
    std::stable_sort(items.begin(), items.end(),
                     [](const AdviceItem& x, const AdviceItem& y) { return x.gain > y.gain; });
    return items;
}

ApiResponse problem(int status, std::string_view code, const std::string& detail) {
    const char* title = "Error";
    switch (status) {
        case 400: title = "Bad Request"; break;
        case 404: title = "Not Found"; break;
        case 405: title = "Method Not Allowed"; break;
        case 500: title = "Internal Server Error"; break;
        case 503: title = "Service Unavailable"; break;
        default: break;
    }
    return {status,
            Json{{"type", "about:blank"}, {"title", title}, {"status", status}, {"code", code}, {"detail", detail}},
            "application/problem+json"};
}

Date system_today() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    return Date{tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday};
}

Api::Api(const Store& store, ApiOptions options) : store_(store), options_(std::move(options)) {
    if (!options_.today) {
        options_.today = system_today;
    }
}

ApiResponse Api::handle(const std::string& method, const std::string& path, const Query& query) const {
    auto parts = split_path(path);
    if (parts.empty() || "/" + parts[0] != kPrefix) {
        return problem(404, "not_found", "no route for " + path);
    }
    parts.erase(parts.begin());
    if (method != "GET") {
        return problem(405, "method_not_allowed", "only GET is supported");
    }
    auto data = store_.snapshot();
    if (!data) {
        return problem(503, "not_ready", "store is still loading");
    }
    try {
        if (parts.size() == 1 && parts[0] == "health") return health(*data);
        if (parts.size() == 1 && parts[0] == "listings") return listings(*data, query);
        if (parts.size() == 3 && parts[0] == "listings" && parts[2] == "ecograde") return listing_report(*data, parts[1]);
        if (parts.size() == 3 && parts[0] == "listings" && parts[2] == "advice") return listing_advice(*data, parts[1]);
        if (parts.size() == 3 && parts[0] == "corporate" && parts[2] == "dashboard")
            return corporate_dashboard(*data, parts[1], query);
        if (parts.size() == 3 && parts[0] == "suppliers" && parts[2] == "dashboard")
            return supplier_dashboard(*data, parts[1]);
    } catch (const Error& e) {
        return problem(500, to_string(e.code()), e.what());
    }
    return problem(404, "not_found", "no route for " + path);
}

ApiResponse Api::health(const StoreData& data) const {
    return {200, Json{{"status", "ok"},
                      {"version", ECOGRADE_VERSION},
                      {"snapshot", data.fingerprint()},
                      {"listings", data.listings().size()}}};
}

ApiResponse Api::listings(const StoreData& data, const Query& query) const {
    static const std::set<std::string> kKnown = {"city", "beds", "sort", "order", "page", "page_size"};
    for (const auto& [key, value] : query) {
        if (!kKnown.count(key)) {
            return problem(400, "bad_parameter", "unknown parameter " + key);
        }
    }
    auto get = [&](const char* key) -> std::optional<std::string> {
        auto it = query.find(key);
        return it == query.end() ? std::nullopt : std::optional<std::string>(it->second);
    };

    std::optional<long> beds;
    if (auto b = get("beds")) {
        beds = parse_int(*b);
        if (!beds || *beds < 0) return problem(400, "bad_parameter", "beds must be a non-negative integer");
    }
    if (auto s = get("sort"); s && *s != "ecograde") {
        return problem(400, "bad_parameter", "sort must be ecograde");
    }
    bool descending = true;
    if (auto o = get("order")) {
        if (*o == "asc") descending = false;
        else if (*o != "desc") return problem(400, "bad_parameter", "order must be asc or desc");
    }
    long page = 1;
    if (auto p = get("page")) {
        auto v = parse_int(*p);
        if (!v || *v < 1) return problem(400, "bad_parameter", "page must be a positive integer");
        page = *v;
    }
    long page_size = static_cast<long>(options_.default_page_size);
    if (auto p = get("page_size")) {
        auto v = parse_int(*p);
        if (!v || *v < 1 || *v > static_cast<long>(options_.max_page_size)) {
            return problem(400, "bad_parameter",
                           "page_size must be between 1 and " + std::to_string(options_.max_page_size));
        }
        page_size = *v;
    }
    auto city = get("city");

    struct Row {
        const Listing* listing;
        const EcoGradeReport* report;
    };
    std::vector<Row> rows;
    for (const auto& l : data.listings()) {
        if (city && !iequals(l.city, *city)) continue;
        if (beds && (!l.bedrooms || *l.bedrooms != *beds)) continue;
        rows.push_back({&l, data.report(l.id)});
    }
    // Listings are held in id order, so a stable sort keeps the id tie-break.
    std::stable_sort(rows.begin(), rows.end(), [descending](const Row& a, const Row& b) {
        if (!a.report || !b.report) return a.report && !b.report;
        return descending ? a.report->overall > b.report->overall : a.report->overall < b.report->overall;
    });

    const auto total = rows.size();
    const auto size = static_cast<std::size_t>(page_size);
    const std::size_t first = std::min(total, (static_cast<std::size_t>(page) - 1) * size);
    const std::size_t last = std::min(total, first + size);
    Json items = Json::array();
    for (std::size_t i = first; i < last; ++i) {
        items.push_back(listing_summary(*rows[i].listing, rows[i].report));
    }
    return {200, Json{{"items", std::move(items)},
                      {"page", page},
                      {"page_size", page_size},
                      {"total", total},
                      {"total_pages", (total + size - 1) / size},
                      {"order", descending ? "desc" : "asc"}}};
}

ApiResponse Api::listing_report(const StoreData& data, const std::string& id) const {
    if (!data.listing(id)) {
        return problem(404, "unknown_listing", "no listing " + id);
    }
    const EcoGradeReport* r = data.report(id);
    if (!r) {
        return problem(404, "not_scored", "listing " + id + " has no EcoGrade");
    }
    return {200, Json(*r)};
}

ApiResponse Api::listing_advice(const StoreData& data, const std::string& id) const {
    if (!data.listing(id)) {
        return problem(404, "unknown_listing", "no listing " + id);
    }
    const EcoGradeReport* r = data.report(id);
    Json items = Json::array();
    bool inferred = false;
    if (r) {
        for (const auto& item : advise(*r, data.calibration())) {
            items.push_back(item);
        }
        inferred = r->provenance.kind == ProvenanceKind::Interpolated;
    }
    return {200, Json{{"listing_id", id},
                      {"overall", r ? Json(r->overall) : Json(nullptr)},
                      {"neighborhood_inferred", inferred},
                      {"items", std::move(items)}}};
}

ApiResponse Api::corporate_dashboard(const StoreData& data, const std::string& client, const Query& query) const {
    for (const auto& [key, value] : query) {
        if (key != "as_of") return problem(400, "bad_parameter", "unknown parameter " + key);
    }
    if (!data.has_client(client)) {
        return problem(404, "unknown_client", "no corporate client " + client);
    }
    Date today = options_.today();
    if (auto it = query.find("as_of"); it != query.end()) {
        auto d = Date::parse(it->second);
        if (!d || it->second.size() != 10) return problem(400, "bad_parameter", "as_of must be YYYY-MM-DD");
        today = *d;
    }
    // A month is complete once the calendar has moved past it.
    const YearMonth current{today.year, today.month};

    struct Accumulator {
        std::array<double, kFactorCount> sum{};
        std::array<int, kFactorCount> count{};
        double overall_sum = 0.0;
        int scored = 0;
        int bookings = 0;
        long nights = 0;
        double co2 = 0.0;
    };
    std::map<YearMonth, Accumulator> months;
    for (const Booking* b : data.client_bookings(client)) {
        if (!(b->month < current)) continue;
        Accumulator& acc = months[b->month];
        ++acc.bookings;
        acc.nights += b->nights;
        const EcoGradeReport* r = data.report(b->listing_id);
        if (!r) continue;
        ++acc.scored;
        acc.overall_sum += r->overall;
        for (Factor f : kAllFactors) {
            if (const auto& s = r->factor_scores[index_of(f)]) {
                acc.sum[index_of(f)] += *s;
                ++acc.count[index_of(f)];
            }
        }
        if (r->co2) {
            acc.co2 += r->co2->avg * static_cast<double>(b->nights) / 365.0;
        }
    }

    Json out_months = Json::array();
    std::optional<std::array<std::optional<double>, kFactorCount>> previous;
    std::optional<double> previous_overall;
    double co2_total = 0.0;
    for (const auto& [month, acc] : months) {
        std::array<std::optional<double>, kFactorCount> means{};
        Json factor_means = Json::object();
        for (Factor f : kAllFactors) {
            auto i = index_of(f);
            if (acc.count[i] > 0) means[i] = acc.sum[i] / acc.count[i];
            factor_means[std::string(to_string(f))] = optional_number(means[i]);
        }
        std::optional<double> overall;
        if (acc.scored > 0) overall = acc.overall_sum / acc.scored;
        Json entry = {{"month", month.iso()},
                      {"bookings", acc.bookings},
                      {"scored_bookings", acc.scored},
                      {"nights", acc.nights},
                      {"factor_means", std::move(factor_means)},
                      {"overall_mean", optional_number(overall)},
                      {"co2_tonnes", acc.co2}};
        if (previous) {
            Json deltas = Json::object();
            for (Factor f : kAllFactors) {
                auto i = index_of(f);
                deltas[std::string(to_string(f))] =
                    means[i] && (*previous)[i] ? Json(*means[i] - *(*previous)[i]) : Json(nullptr);
            }
            deltas["overall"] = overall && previous_overall ? Json(*overall - *previous_overall) : Json(nullptr);
            entry["deltas"] = std::move(deltas);
        }
        co2_total += acc.co2;
        out_months.push_back(std::move(entry));
        previous = means;
        previous_overall = overall;
    }
    return {200, Json{{"client_id", client},
                      {"as_of", today.iso()},
                      {"months", std::move(out_months)},
                      {"co2_total_tonnes", co2_total}}};
}

ApiResponse Api::supplier_dashboard(const StoreData& data, const std::string& supplier) const {
    if (!data.has_supplier(supplier)) {
        return problem(404, "unknown_supplier", "no supplier " + supplier);
    }
    Json rows = Json::array();
    for (const Listing* l : data.supplier_listings(supplier)) {
        const EcoGradeReport* r = data.report(l->id);
        Json factors = Json::object();
        for (Factor f : kAllFactors) {
            const std::optional<double> s = r ? r->factor_scores[index_of(f)] : std::nullopt;
            factors[std::string(to_string(f))] = s ? Json(*s) : Json(kComingSoon);
        }
        Json row = {{"listing_id", l->id},
                    {"city", l->city},
                    {"bedrooms", l->bedrooms ? Json(*l->bedrooms) : Json(nullptr)},
                    {"factors", std::move(factors)},
                    {"overall", r ? Json(r->overall) : Json(kComingSoon)},
                    {"leaves", r ? Json(r->leaves) : Json(kComingSoon)}};
        if (r && r->co2) {
            row["co2"] = {{"highest", r->co2->high}, {"lowest", r->co2->low}, {"average", r->co2->avg}};
        } else {
            row["co2"] = kComingSoon;
        }

        EmissionsComparison cmp = ComingSoon{"no CO2 estimate"};
        if (r && r->co2 && l->bedrooms) {
            cmp = emissions_comparison(SampleStats::of(*r->co2), data.baselines().find(l->city, *l->bedrooms));
        }
        row["comparison"] = comparison_text(cmp);
        if (const auto* label = std::get_if<ComparisonLabel>(&cmp)) {
            row["comparison_detail"] = {{"d_p", label->d_p},
                                        {"direction", label->direction == Direction::Higher ? "higher" : "lower"},
                                        {"reference", label->reference}};
        } else {
            row["comparison_detail"] = {{"reason", std::get<ComingSoon>(cmp).reason}};
        }
        rows.push_back(std::move(row));
    }
    return {200, Json{{"supplier_id", supplier}, {"rows", std::move(rows)}}};
}

}  // namespace ecograde
