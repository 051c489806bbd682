#include "ecograde/service/store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ecograde/core/error.hpp"
#include "ecograde/core/hash.hpp"

namespace ecograde {

void to_json(Json& j, const Booking& b) {
    j = Json{{"client_id", b.client_id},
             {"listing_id", b.listing_id},
             {"month", b.month.iso()},
             {"nights", b.nights}};
}

void from_json(const Json& j, Booking& b) {
    b.client_id = j.at("client_id").get<std::string>();
    b.listing_id = j.at("listing_id").get<std::string>();
    auto month = YearMonth::parse(j.at("month").get<std::string>());
    if (!month) {
        fail(ErrorCode::Parse, "booking month must be YYYY-MM");
    }
    b.month = *month;
    b.nights = j.at("nights").get<int>();
    if (b.nights <= 0) {
        fail(ErrorCode::Parse, "booking nights must be positive");
    }
}

StoreData::StoreData(std::vector<Listing> listings, std::vector<EcoGradeReport> reports,
                     std::vector<CityBaseline> baselines, std::vector<Booking> bookings,
                     std::set<std::string> clients, std::set<std::string> suppliers,
                     ScoreCalibration calibration)
    : listings_(std::move(listings)),
      bookings_(std::move(bookings)),
      clients_(std::move(clients)),
      suppliers_(std::move(suppliers)),
      calibration_(calibration) {
    std::sort(listings_.begin(), listings_.end(),
              [](const Listing& a, const Listing& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < listings_.size(); ++i) {
        if (!listing_pos_.emplace(listings_[i].id, i).second) {
            fail(ErrorCode::Config, "duplicate listing id " + listings_[i].id);
        }
        if (listings_[i].supplier_id) {
            suppliers_.insert(*listings_[i].supplier_id);
        }
    }
    for (auto& r : reports) {
        if (!listing_pos_.count(r.listing_id)) {
            fail(ErrorCode::Config, "report for unknown listing " + r.listing_id);
        }
        std::string id = r.listing_id;
        if (!reports_.emplace(id, std::move(r)).second) {
            fail(ErrorCode::Config, "duplicate report for listing " + id);
        }
    }
    std::sort(baselines.begin(), baselines.end(), [](const CityBaseline& a, const CityBaseline& b) {
        return std::tie(a.city, a.bed_type) < std::tie(b.city, b.bed_type);
    });
    baselines_.baselines = std::move(baselines);
    for (const auto& b : bookings_) {
        if (!listing_pos_.count(b.listing_id)) {
            fail(ErrorCode::Config, "booking references unknown listing " + b.listing_id);
        }
        clients_.insert(b.client_id);
    }
    std::stable_sort(bookings_.begin(), bookings_.end(), [](const Booking& a, const Booking& b) {
        return std::tie(a.client_id, a.month, a.listing_id) < std::tie(b.client_id, b.month, b.listing_id);
    });

    Json canonical = {{"listings", listings_},
                      {"baselines", baselines_.baselines},
                      {"bookings", bookings_},
                      {"clients", clients_},
                      {"suppliers", suppliers_},
                      {"calibration", calibration_}};
    Json report_list = Json::array();
    for (const auto& [id, r] : reports_) {
        report_list.push_back(r);
    }
    canonical["reports"] = std::move(report_list);
    fingerprint_ = content_hash(canonical.dump());
}

const Listing* StoreData::listing(const std::string& id) const {
    auto it = listing_pos_.find(id);
    return it == listing_pos_.end() ? nullptr : &listings_[it->second];
}

const EcoGradeReport* StoreData::report(const std::string& listing_id) const {
    auto it = reports_.find(listing_id);
    return it == reports_.end() ? nullptr : &it->second;
}

std::vector<const Listing*> StoreData::supplier_listings(const std::string& supplier_id) const {
    std::vector<const Listing*> out;
    for (const auto& l : listings_) {
        if (l.supplier_id && *l.supplier_id == supplier_id) {
            out.push_back(&l);
        }
    }
    return out;
}

std::vector<const Booking*> StoreData::client_bookings(const std::string& client_id) const {
    std::vector<const Booking*> out;
    for (const auto& b : bookings_) {
        if (b.client_id == client_id) {
            out.push_back(&b);
        }
    }
    return out;
}

std::shared_ptr<const StoreData> Store::snapshot() const {
    std::lock_guard lock(mutex_);
    return data_;
}

void Store::publish(std::shared_ptr<const StoreData> data) {
    std::lock_guard lock(mutex_);
    data_ = std::move(data);
}

std::set<std::string> read_id_lines(std::istream& in) {
    std::set<std::string> ids;
    for (const Json& j : read_json_lines<Json>(in)) {
        ids.insert(j.at("id").get<std::string>());
    }
    return ids;
}

namespace {

std::ifstream open_required(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::Io, "cannot open " + path.string());
    }
    return in;
}

template <typename T>
std::vector<T> read_optional_lines(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        return {};
    }
    auto in = open_required(path);
    return read_json_lines<T>(in);
}

std::set<std::string> read_optional_ids(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        return {};
    }
    auto in = open_required(path);
    return read_id_lines(in);
}

}  // namespace

std::shared_ptr<const StoreData> load_store(const StorePaths& paths) {
    auto listings_in = open_required(paths.store_dir / "listings.jsonl");
    auto listings = read_json_lines<Listing>(listings_in);

    auto reports_in = open_required(paths.scores_dir / "reports.jsonl");
    auto reports = read_json_lines<EcoGradeReport>(reports_in);

    std::vector<CityBaseline> baselines;
    if (std::filesystem::exists(paths.scores_dir / "baselines.csv")) {
        auto in = open_required(paths.scores_dir / "baselines.csv");
        baselines = read_baselines_csv(in);
    }

    ScoreCalibration calibration;
    if (std::filesystem::exists(paths.scores_dir / "calibration.json")) {
        try {
            calibration = Json::parse(read_file(paths.scores_dir / "calibration.json")).get<ScoreCalibration>();
        } catch (const Json::exception& e) {
            fail(ErrorCode::Config, std::string("calibration.json: ") + e.what());
        }
    }

    return std::make_shared<const StoreData>(
        std::move(listings), std::move(reports), std::move(baselines),
        read_optional_lines<Booking>(paths.store_dir / "bookings.jsonl"),
        read_optional_ids(paths.store_dir / "clients.jsonl"),
        read_optional_ids(paths.store_dir / "suppliers.jsonl"), calibration);
}

}  // namespace ecograde
