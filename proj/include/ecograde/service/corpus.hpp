#pragma once

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ecograde/core/model.hpp"
#include "ecograde/geo/geo.hpp"
#include "ecograde/service/store.hpp"
#include "ecograde/validate/synthetic.hpp"

namespace ecograde {

struct CorpusOptions {
    int clients = 3;
    YearMonth first_month{2024, 1};
    int months = 12;
    int bookings_per_client_month = 12;
    int max_nights = 14;
};

/// Every synthetic city merged into one marketplace, plus corporate bookings.
struct SyntheticCorpus {
    std::vector<Listing> listings;
    std::vector<EpcRecord> certificates;  // raw: duplicates and anomalies included
    TransportData transport;
    std::vector<Booking> bookings;
    std::set<std::string> clients;
    std::set<std::string> suppliers;
};

SyntheticCorpus build_synthetic_corpus(std::span<const SyntheticCityParams> cities,
                                       const BedroomLookupTable& bedrooms = BedroomLookupTable::defaults(),
                                       const CorpusOptions& options = {});

/// epc_export.csv, listings.jsonl, transport/, bookings.jsonl, clients.jsonl, suppliers.jsonl.
void write_corpus(const std::filesystem::path& dir, const SyntheticCorpus& corpus);

}  // namespace ecograde
