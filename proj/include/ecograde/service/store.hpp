#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "ecograde/core/date.hpp"
#include "ecograde/core/model.hpp"
#include "ecograde/core/serialize.hpp"
#include "ecograde/score/factors.hpp"
#include "ecograde/stats/compare.hpp"

namespace ecograde {

/// Nights a corporate client booked at a listing within one calendar month.
struct Booking {
    std::string client_id;
    std::string listing_id;
    YearMonth month{};
    int nights = 0;

    bool operator==(const Booking&) const = default;
};

void to_json(Json& j, const Booking& b);
void from_json(const Json& j, Booking& b);

/// Immutable view served by the API. Built once, then shared read-only.
class StoreData {
public:
    StoreData(std::vector<Listing> listings, std::vector<EcoGradeReport> reports,
              std::vector<CityBaseline> baselines, std::vector<Booking> bookings,
              std::set<std::string> clients, std::set<std::string> suppliers,
              ScoreCalibration calibration);

    const std::vector<Listing>& listings() const noexcept { return listings_; }
    const std::vector<Booking>& bookings() const noexcept { return bookings_; }
    const BaselineSet& baselines() const noexcept { return baselines_; }
    const ScoreCalibration& calibration() const noexcept { return calibration_; }
    const std::string& fingerprint() const noexcept { return fingerprint_; }

    const Listing* listing(const std::string& id) const;
    const EcoGradeReport* report(const std::string& listing_id) const;
    bool has_client(const std::string& id) const { return clients_.count(id) > 0; }
    bool has_supplier(const std::string& id) const { return suppliers_.count(id) > 0; }

    /// Listings owned by a supplier, ordered by id.
    std::vector<const Listing*> supplier_listings(const std::string& supplier_id) const;
    std::vector<const Booking*> client_bookings(const std::string& client_id) const;

private:
    std::vector<Listing> listings_;  // sorted by id
    std::map<std::string, std::size_t> listing_pos_;
    std::map<std::string, EcoGradeReport> reports_;
    BaselineSet baselines_;
    std::vector<Booking> bookings_;
    std::set<std::string> clients_;
    std::set<std::string> suppliers_;
    ScoreCalibration calibration_;
    std::string fingerprint_;
};

/// Holder of the current snapshot. Readers take a shared_ptr copy and keep
/// it for the whole request; publish() swaps in a new snapshot.
class Store {
public:
    std::shared_ptr<const StoreData> snapshot() const;
    void publish(std::shared_ptr<const StoreData> data);
    bool loaded() const { return snapshot() != nullptr; }

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const StoreData> data_;
};

/// Files of an ingested store directory and a scoring output directory.
struct StorePaths {
    std::filesystem::path store_dir;   // listings.jsonl, bookings.jsonl, clients.jsonl, suppliers.jsonl
    std::filesystem::path scores_dir;  // reports.jsonl, baselines.csv, calibration.json
};

/// Reads both directories. Optional files (bookings, clients, suppliers) may be
/// absent. Throws Error(Io|Parse|Config).
std::shared_ptr<const StoreData> load_store(const StorePaths& paths);

/// Ids from "{"id": ...}" lines.
std::set<std::string> read_id_lines(std::istream& in);

}  // namespace ecograde
