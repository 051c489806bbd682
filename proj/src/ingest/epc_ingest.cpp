#include "ecograde/ingest/epc_ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <tuple>

#include "ecograde/core/address.hpp"
#include "ecograde/core/error.hpp"
#include "ecograde/ingest/csv.hpp"

namespace ecograde {
namespace {

// Canonical header form: lowercase, '_' and ' ' as '-'.
std::string fold_header(std::string_view name) {
    std::string out;
    for (char c : name) {
        unsigned char u = static_cast<unsigned char>(c);
        if (c == '_' || c == ' ') {
            out.push_back('-');
        } else if (u != 0xEF && u != 0xBB && u != 0xBF) {  // drop a UTF-8 BOM
            out.push_back(static_cast<char>(std::tolower(u)));
        }
    }
    return out;
}

std::string_view trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    if (text.empty()) {
        return std::nullopt;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return value;
}

bool contains_gas(std::string_view fuel) {
    std::string lower;
    for (char c : fuel) {
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return lower.find("gas") != std::string::npos;
}

// A row as folded-header -> raw value.
using Row = std::map<std::string, std::string>;

const std::string* field(const Row& row, const char* key) {
    auto it = row.find(key);
    if (it == row.end() || trim(it->second).empty()) {
        return nullptr;
    }
    return &it->second;
}

void convert_row(const Row& row, std::size_t row_no, ParseOutcome& out) {
    auto diag = [&](std::string reason) { out.diagnostics.push_back({row_no, std::move(reason)}); };

    std::string address;
    if (const auto* a = field(row, "address")) {
        address = *a;
    } else {
        for (const char* key : {"address1", "address2", "address3"}) {
            if (const auto* part = field(row, key)) {
                address += (address.empty() ? "" : ", ") + *part;
            }
        }
    }
    const auto* postcode = field(row, "postcode");
    const auto* area = field(row, "total-floor-area");
    const auto* kwh = field(row, "energy-consumption-current");
    const auto* date = field(row, "lodgement-date");

    std::vector<std::string> missing;
    if (address.empty()) missing.push_back("address");
    if (!postcode) missing.push_back("postcode");
    if (!area) missing.push_back("total-floor-area");
    if (!kwh) missing.push_back("energy-consumption-current");
    if (!date) missing.push_back("lodgement-date");
    if (!missing.empty()) {
        std::string reason = "missing mandatory field:";
        for (const auto& m : missing) {
            reason += " " + m;
        }
        diag(std::move(reason));
        return;
    }

    EpcRecord r;
    r.address_key = normalize_address(address);
    r.postcode = normalize_postcode(*postcode);

    auto area_v = parse_number(*area);
    if (!area_v || *area_v <= 0.0) {
        diag("invalid total-floor-area '" + *area + "'");
        return;
    }
    r.floor_area = *area_v;

    auto kwh_v = parse_number(*kwh);
    if (!kwh_v || *kwh_v < 0.0) {
        diag("invalid energy-consumption-current '" + *kwh + "'");
        return;
    }
    r.kwh_per_m2 = *kwh_v;

    auto date_v = Date::parse(trim(*date));
    if (!date_v) {
        diag("invalid lodgement-date '" + *date + "'");
        return;
    }
    r.lodgement_date = *date_v;

    if (const auto* rating = field(row, "current-energy-rating")) {
        auto t = trim(*rating);
        char letter = t.size() == 1 ? static_cast<char>(std::toupper(static_cast<unsigned char>(t[0]))) : '?';
        if (letter >= 'A' && letter <= 'G') {
            r.headline_rating = letter;
        } else {
            diag("unrecognized current-energy-rating '" + *rating + "'");
        }
    }
    if (const auto* fuel = field(row, "main-fuel")) {
        r.gas_main_heat = contains_gas(*fuel);
    }

    for (EpcAttribute a : kAllAttributes) {
        const auto* label = field(row, std::string(attribute_column(a)).c_str());
        if (!label) {
            continue;
        }
        if (auto band = parse_band(*label)) {
            r.bands[index_of(a)] = *band;
        } else {
            diag(std::string(attribute_column(a)) + ": unrecognized band '" + *label + "'");
        }
    }
    out.records.push_back(std::move(r));
}

void parse_csv(std::istream& in, ParseOutcome& out) {
    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) {
        return;
    }
    std::vector<std::string> header;
    header.reserve(fields.size());
    for (const auto& f : fields) {
        header.push_back(fold_header(trim(f)));
    }
    std::size_t row_no = 0;
    while (reader.next(fields)) {
        if (fields.size() == 1 && trim(fields[0]).empty()) {
            continue;
        }
        ++row_no;
        if (fields.size() != header.size()) {
            out.diagnostics.push_back({row_no, "expected " + std::to_string(header.size()) +
                                                   " fields, found " + std::to_string(fields.size())});
            continue;
        }
        Row row;
        for (std::size_t i = 0; i < header.size(); ++i) {
            row[header[i]] = fields[i];
        }
        convert_row(row, row_no, out);
    }
}

void parse_json_lines(std::istream& in, ParseOutcome& out) {
    std::string line;
    std::size_t row_no = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        ++row_no;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::exception& e) {
            out.diagnostics.push_back({row_no, std::string("malformed JSON: ") + e.what()});
            continue;
        }
        if (!j.is_object()) {
            out.diagnostics.push_back({row_no, "expected a JSON object"});
            continue;
        }
        Row row;
        for (const auto& [key, value] : j.items()) {
            if (value.is_string()) {
                row[fold_header(key)] = value.get<std::string>();
            } else if (value.is_number()) {
                row[fold_header(key)] = value.dump();
            }
        }
        convert_row(row, row_no, out);
    }
    if (in.bad()) {
        fail(ErrorCode::Io, "read failure");
    }
}

int rating_rank(const std::optional<char>& rating) {
    return rating ? *rating - 'A' : -1;
}

}  // namespace

ParseOutcome parse_epc_export(std::istream& source, ExportFormat format) {
    if (!source) {
        fail(ErrorCode::Io, "unreadable certificate stream");
    }
    ParseOutcome out;
    if (format == ExportFormat::Csv) {
        parse_csv(source, out);
    } else {
        parse_json_lines(source, out);
    }
    return out;
}

void CleaningRules::validate() const {
    if (!(min_plausible_area < max_plausible_area)) {
        fail(ErrorCode::Config, "min_plausible_area must be below max_plausible_area");
    }
    if (!(good_rating_kwh_cap > 0.0)) {
        fail(ErrorCode::Config, "good_rating_kwh_cap must be positive");
    }
    for (char c : good_ratings) {
        if (c < 'A' || c > 'G') {
            fail(ErrorCode::Config, "good_ratings must be letters A-G");
        }
    }
}

void write_epc_export_csv(std::ostream& out, const std::vector<EpcRecord>& records) {
    auto number = [](double v) {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    };
    std::vector<std::string> header = {"address", "postcode", "total-floor-area", "energy-consumption-current",
                                       "lodgement-date", "current-energy-rating", "main-fuel"};
    for (EpcAttribute a : kAllAttributes) {
        header.emplace_back(attribute_column(a));
    }
    out << csv_row(header) << '\n';
    std::vector<std::string> row;
    for (const auto& r : records) {
        row = {r.address_key,
               r.postcode,
               number(r.floor_area),
               number(r.kwh_per_m2),
               r.lodgement_date.iso(),
               r.headline_rating ? std::string(1, *r.headline_rating) : std::string(),
               r.gas_main_heat ? "mains gas (not community)" : "electricity (not community)"};
        for (EpcAttribute a : kAllAttributes) {
            const auto& band = r.bands[index_of(a)];
            row.emplace_back(band ? std::string(to_string(*band)) : std::string());
        }
        out << csv_row(row) << '\n';
    }
}

void to_json(Json& j, const CleaningRules& rules) {
    Json ratings = Json::array();
    for (char c : rules.good_ratings) {
        ratings.push_back(std::string(1, c));
    }
    j = Json{{"min_plausible_area", rules.min_plausible_area},
             {"max_plausible_area", rules.max_plausible_area},
             {"good_rating_kwh_cap", rules.good_rating_kwh_cap},
             {"good_ratings", std::move(ratings)}};
}

void from_json(const Json& j, CleaningRules& rules) {
    CleaningRules defaults;
    rules.min_plausible_area = j.value("min_plausible_area", defaults.min_plausible_area);
    rules.max_plausible_area = j.value("max_plausible_area", defaults.max_plausible_area);
    rules.good_rating_kwh_cap = j.value("good_rating_kwh_cap", defaults.good_rating_kwh_cap);
    if (auto it = j.find("good_ratings"); it != j.end()) {
        rules.good_ratings.clear();
        for (const auto& r : *it) {
            auto s = r.get<std::string>();
            if (s.size() != 1) {
                fail(ErrorCode::Config, "good_ratings entries must be single letters");
            }
            rules.good_ratings.insert(static_cast<char>(std::toupper(static_cast<unsigned char>(s[0]))));
        }
    } else {
        rules.good_ratings = defaults.good_ratings;
    }
}

std::string_view to_string(RejectReason reason) noexcept {
    switch (reason) {
        case RejectReason::ImplausibleArea: return "implausible_area";
        case RejectReason::RatingKwhConflict: return "rating_kwh_conflict";
        case RejectReason::NoBands: return "no_bands";
    }
    return "unknown";
}

CleanOutcome clean_records(std::vector<EpcRecord> records, const CleaningRules& rules) {
    CleanOutcome out;
    for (auto& r : records) {
        if (r.floor_area < rules.min_plausible_area || r.floor_area > rules.max_plausible_area) {
            out.rejected.push_back({std::move(r), RejectReason::ImplausibleArea});
        } else if (r.headline_rating && rules.good_ratings.count(*r.headline_rating) &&
                   r.kwh_per_m2 > rules.good_rating_kwh_cap) {
            out.rejected.push_back({std::move(r), RejectReason::RatingKwhConflict});
        } else if (r.band_count() == 0) {
            out.rejected.push_back({std::move(r), RejectReason::NoBands});
        } else {
            out.kept.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<EpcRecord> dedupe_by_address(std::vector<EpcRecord> records) {
    struct Keyed {
        std::string key;
        std::string print;
        EpcRecord record;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(records.size());
    for (auto& r : records) {
        auto key = property_key(r.address_key, r.postcode);
        auto print = fingerprint(r);
        keyed.push_back({std::move(key), std::move(print), std::move(r)});
    }
    // Preferred record first within each key.
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        if (a.key != b.key) return a.key < b.key;
        if (a.record.lodgement_date != b.record.lodgement_date) {
            return a.record.lodgement_date > b.record.lodgement_date;
        }
        int ra = rating_rank(a.record.headline_rating);
        int rb = rating_rank(b.record.headline_rating);
        if (ra != rb) return ra > rb;
        return a.print < b.print;
    });
    std::vector<EpcRecord> out;
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        if (i == 0 || keyed[i].key != keyed[i - 1].key) {
            out.push_back(std::move(keyed[i].record));
        }
    }
    return out;
}

void write_rejections_csv(std::ostream& out, const std::vector<Rejection>& rejected) {
    out << "fingerprint,reason\n";
    for (const auto& r : rejected) {
        out << fingerprint(r.record) << ',' << to_string(r.reason) << '\n';
    }
}

}  // namespace ecograde
