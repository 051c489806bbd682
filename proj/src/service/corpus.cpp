#include "ecograde/service/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ecograde/core/error.hpp"
#include "ecograde/ingest/epc_ingest.hpp"
#include "ecograde/validate/rng.hpp"

namespace ecograde {

SyntheticCorpus build_synthetic_corpus(std::span<const SyntheticCityParams> cities,
                                       const BedroomLookupTable& bedrooms, const CorpusOptions& options) {
    SyntheticCorpus corpus;
    std::uint64_t seed = 0;
    for (const auto& params : cities) {
        seed = mix_seed(seed ^ params.seed);
        if (params.n_addresses == 0) continue;
        SyntheticCity city = generate_city(params, bedrooms);
        for (auto& l : city.listings) {
            if (l.supplier_id) corpus.suppliers.insert(*l.supplier_id);
            corpus.listings.push_back(std::move(l));
        }
        for (auto& c : city.certificates) {
            corpus.certificates.push_back(std::move(c));
        }
        for (auto& p : city.transport.fixed) {
            corpus.transport.fixed.push_back(std::move(p));
        }
        // Snapshots with the same capture time merge across cities.
        for (auto& snap : city.transport.snapshots) {
            auto it = std::find_if(corpus.transport.snapshots.begin(), corpus.transport.snapshots.end(),
                                   [&](const Snapshot& s) { return s.captured_at == snap.captured_at; });
            if (it == corpus.transport.snapshots.end()) {
                corpus.transport.snapshots.push_back(std::move(snap));
            } else {
                it->points.insert(it->points.end(), snap.points.begin(), snap.points.end());
            }
        }
    }
    if (corpus.listings.empty()) {
        return corpus;
    }

    Rng rng(mix_seed(seed ^ 0xb00c1a95ULL));
    for (int c = 1; c <= options.clients; ++c) {
        char id[32];
        std::snprintf(id, sizeof id, "CORP-%02d", c);
        corpus.clients.insert(id);
        YearMonth month = options.first_month;
        for (int m = 0; m < options.months; ++m) {
            for (int b = 0; b < options.bookings_per_client_month; ++b) {
                const Listing& l = corpus.listings[rng.index(corpus.listings.size())];
                int nights = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(options.max_nights)));
                corpus.bookings.push_back({id, l.id, month, nights});
            }
            month = month.month == 12 ? YearMonth{month.year + 1, 1} : YearMonth{month.year, month.month + 1};
        }
    }
    return corpus;
}

void write_corpus(const std::filesystem::path& dir, const SyntheticCorpus& corpus) {
    std::ostringstream epc;
    write_epc_export_csv(epc, corpus.certificates);
    write_file(dir / "epc_export.csv", epc.str());

    std::ostringstream listings;
    write_json_lines(listings, corpus.listings);
    write_file(dir / "listings.jsonl", listings.str());

    write_transport_dir(dir / "transport", corpus.transport);

    std::ostringstream bookings;
    write_json_lines(bookings, corpus.bookings);
    write_file(dir / "bookings.jsonl", bookings.str());

    auto ids = [](const std::set<std::string>& set) {
        std::ostringstream out;
        for (const auto& id : set) out << Json{{"id", id}}.dump() << '\n';
        return out.str();
    };
    write_file(dir / "clients.jsonl", ids(corpus.clients));
    write_file(dir / "suppliers.jsonl", ids(corpus.suppliers));
}

}  // namespace ecograde
