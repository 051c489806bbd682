#include "ecograde/core/serialize.hpp"

#include <fstream>
#include <sstream>

#include "ecograde/core/address.hpp"
#include "ecograde/core/error.hpp"
#include "ecograde/core/hash.hpp"

namespace ecograde {
namespace {

template <typename T>
Json opt(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> get_opt(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return std::nullopt;
    }
    return it->template get<T>();
}

[[noreturn]] void bad(const std::string& what) {
    throw Json::other_error::create(501, what, nullptr);
}

}  // namespace

void to_json(Json& j, const Date& d) { j = d.iso(); }

void from_json(const Json& j, Date& d) {
    auto parsed = Date::parse(j.get<std::string>());
    if (!parsed) {
        bad("invalid date: " + j.get<std::string>());
    }
    d = *parsed;
}

void to_json(Json& j, const YearMonth& m) { j = m.iso(); }

void from_json(const Json& j, YearMonth& m) {
    auto parsed = YearMonth::parse(j.get<std::string>());
    if (!parsed) {
        bad("invalid month: " + j.get<std::string>());
    }
    m = *parsed;
}

void to_json(Json& j, const EpcRecord& r) {
    Json bands = Json::object();
    for (EpcAttribute a : kAllAttributes) {
        if (const auto& b = r.bands[index_of(a)]) {
            bands[std::string(attribute_key(a))] = std::string(to_string(*b));
        }
    }
    j = Json{{"address_key", r.address_key},
             {"postcode", r.postcode},
             {"floor_area", r.floor_area},
             {"bands", std::move(bands)},
             {"kwh_per_m2", r.kwh_per_m2},
             {"lodgement_date", r.lodgement_date},
             {"headline_rating",
              r.headline_rating ? Json(std::string(1, *r.headline_rating)) : Json(nullptr)},
             {"gas_main_heat", r.gas_main_heat}};
}

void from_json(const Json& j, EpcRecord& r) {
    r.address_key = normalize_address(j.at("address_key").get<std::string>());
    r.postcode = normalize_postcode(j.at("postcode").get<std::string>());
    r.floor_area = j.at("floor_area").get<double>();
    r.kwh_per_m2 = j.at("kwh_per_m2").get<double>();
    r.lodgement_date = j.at("lodgement_date").get<Date>();
    r.bands = {};
    if (auto it = j.find("bands"); it != j.end()) {
        for (const auto& [key, value] : it->items()) {
            auto attr = parse_attribute_key(key);
            auto band = parse_band(value.get<std::string>());
            if (!attr || !band) {
                bad("invalid band entry: " + key);
            }
            r.bands[index_of(*attr)] = *band;
        }
    }
    auto rating = get_opt<std::string>(j, "headline_rating");
    r.headline_rating = rating && rating->size() == 1 ? std::optional<char>((*rating)[0]) : std::nullopt;
    r.gas_main_heat = j.value("gas_main_heat", false);
}

void to_json(Json& j, const Tariff& t) {
    j = Json{{"renewable_fraction", t.renewable_fraction}, {"gas_main_heat", t.gas_main_heat}};
}

void from_json(const Json& j, Tariff& t) {
    t.renewable_fraction = j.at("renewable_fraction").get<double>();
    t.gas_main_heat = j.value("gas_main_heat", false);
}

void to_json(Json& j, const Listing& l) {
    j = Json{{"id", l.id},
             {"address_key", l.address_key},
             {"postcode", l.postcode},
             {"latitude", l.latitude},
             {"longitude", l.longitude},
             {"bedrooms", opt(l.bedrooms)},
             {"city", l.city},
             {"tariff", opt(l.tariff)},
             {"meter_kwh_per_m2", opt(l.meter_kwh_per_m2)},
             {"supplier_id", opt(l.supplier_id)}};
}

void from_json(const Json& j, Listing& l) {
    l.id = j.at("id").get<std::string>();
    std::string address = j.contains("address_key") ? j.at("address_key").get<std::string>()
                                                    : j.at("address").get<std::string>();
    l.address_key = normalize_address(address);
    l.postcode = normalize_postcode(j.at("postcode").get<std::string>());
    l.latitude = j.at("latitude").get<double>();
    l.longitude = j.at("longitude").get<double>();
    l.bedrooms = get_opt<int>(j, "bedrooms");
    l.city = j.at("city").get<std::string>();
    l.tariff = get_opt<Tariff>(j, "tariff");
    l.meter_kwh_per_m2 = get_opt<double>(j, "meter_kwh_per_m2");
    l.supplier_id = get_opt<std::string>(j, "supplier_id");
    if (l.latitude < -90.0 || l.latitude > 90.0 || l.longitude < -180.0 || l.longitude > 180.0) {
        bad("coordinates out of range for listing " + l.id);
    }
}

void to_json(Json& j, const Provenance& p) {
    j = Json{{"kind", std::string(to_string(p.kind))},
             {"n_neighbors", p.n_neighbors},
             {"widened", p.widened}};
}

void from_json(const Json& j, Provenance& p) {
    auto kind = parse_provenance_kind(j.at("kind").get<std::string>());
    if (!kind) {
        bad("invalid provenance kind");
    }
    p.kind = *kind;
    p.n_neighbors = j.value("n_neighbors", 0);
    p.widened = j.value("widened", false);
}

void to_json(Json& j, const Co2Summary& c) {
    j = Json{{"avg", c.avg}, {"low", c.low}, {"high", c.high}, {"sigma", c.sigma}, {"samples", c.samples}};
}

void from_json(const Json& j, Co2Summary& c) {
    c.avg = j.at("avg").get<double>();
    c.low = j.at("low").get<double>();
    c.high = j.at("high").get<double>();
    c.sigma = j.value("sigma", 0.0);
    c.samples = j.value("samples", 1);
}

void to_json(Json& j, const EcoGradeReport& r) {
    Json factors = Json::object();
    for (Factor f : kAllFactors) {
        const auto& score = r.factor_scores[index_of(f)];
        const auto& input = r.factor_inputs[index_of(f)];
        factors[std::string(to_string(f))] =
            score ? Json{{"score", *score}, {"input", opt(input)}} : Json(nullptr);
    }
    Json attributes = Json::object();
    for (EpcAttribute a : kAllAttributes) {
        if (const auto& s = r.attribute_scores[index_of(a)]) {
            attributes[std::string(attribute_key(a))] = *s;
        }
    }
    Json missing = Json::array();
    for (Factor f : r.missing_factors) {
        missing.push_back(std::string(to_string(f)));
    }
    j = Json{{"listing_id", r.listing_id},
             {"city", r.city},
             {"bedrooms", opt(r.bedrooms)},
             {"factors", std::move(factors)},
             {"attributes", std::move(attributes)},
             {"overall", r.overall},
             {"leaves", r.leaves},
             {"floor_area", opt(r.floor_area)},
             {"kwh_per_m2", opt(r.kwh_per_m2)},
             {"co2", opt(r.co2)},
             {"provenance", r.provenance},
             {"missing_factors", std::move(missing)}};
}

void from_json(const Json& j, EcoGradeReport& r) {
    r.listing_id = j.at("listing_id").get<std::string>();
    r.city = j.value("city", std::string{});
    r.bedrooms = get_opt<int>(j, "bedrooms");
    r.factor_scores = {};
    r.factor_inputs = {};
    const Json& factors = j.at("factors");
    for (Factor f : kAllFactors) {
        auto it = factors.find(std::string(to_string(f)));
        if (it == factors.end() || it->is_null()) {
            continue;
        }
        r.factor_scores[index_of(f)] = it->at("score").get<double>();
        r.factor_inputs[index_of(f)] = get_opt<double>(*it, "input");
    }
    r.attribute_scores = {};
    if (auto it = j.find("attributes"); it != j.end()) {
        for (const auto& [key, value] : it->items()) {
            auto attr = parse_attribute_key(key);
            if (!attr) {
                bad("unknown attribute: " + key);
            }
            r.attribute_scores[index_of(*attr)] = value.get<double>();
        }
    }
    r.overall = j.at("overall").get<double>();
    r.leaves = j.at("leaves").get<int>();
    r.floor_area = get_opt<double>(j, "floor_area");
    r.kwh_per_m2 = get_opt<double>(j, "kwh_per_m2");
    r.co2 = get_opt<Co2Summary>(j, "co2");
    r.provenance = j.at("provenance").get<Provenance>();
    r.missing_factors.clear();
    for (const auto& name : j.value("missing_factors", Json::array())) {
        auto f = parse_factor(name.get<std::string>());
        if (!f) {
            bad("unknown factor");
        }
        r.missing_factors.push_back(*f);
    }
}

void to_json(Json& j, const CityBaseline& b) {
    j = Json{{"city", b.city}, {"bed_type", b.bed_type}, {"mu", b.c_mu}, {"sigma", b.c_sigma}, {"n", b.c_n}};
}

void from_json(const Json& j, CityBaseline& b) {
    b.city = j.at("city").get<std::string>();
    b.bed_type = j.at("bed_type").get<int>();
    b.c_mu = j.at("mu").get<double>();
    b.c_sigma = j.at("sigma").get<double>();
    b.c_n = j.at("n").get<int>();
}

std::string fingerprint(const EpcRecord& record) {
    return content_hash(Json(record).dump());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::Io, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail(ErrorCode::Io, "cannot write " + path.string());
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
        fail(ErrorCode::Io, "write failed for " + path.string());
    }
}

}  // namespace ecograde
