#include "ecograde/match/epc_index.hpp"

#include <algorithm>

#include "ecograde/core/address.hpp"
#include "ecograde/core/error.hpp"
#include "ecograde/core/hash.hpp"
#include "ecograde/core/serialize.hpp"

namespace ecograde {
namespace {

constexpr int kSnapshotVersion = 1;

Json snapshot_json(const std::vector<EpcRecord>& records) {
    return Json{{"version", kSnapshotVersion}, {"records", records}};
}

}  // namespace

EpcIndex::EpcIndex(std::vector<EpcRecord> records) : records_(std::move(records)) {
    std::sort(records_.begin(), records_.end(), [](const EpcRecord& a, const EpcRecord& b) {
        return property_key(a.address_key, a.postcode) < property_key(b.address_key, b.postcode);
    });
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        auto [it, inserted] = by_key_.emplace(property_key(r.address_key, r.postcode), i);
        if (!inserted) {
            fail(ErrorCode::ContractViolation, "duplicate certificate for " + it->first);
        }
        by_postcode_[r.postcode].push_back(i);
        by_outward_[outward_code(r.postcode)].push_back(i);
    }
}

const EpcRecord* EpcIndex::find(std::string_view address_key, std::string_view postcode) const {
    auto it = by_key_.find(property_key(address_key, postcode));
    return it == by_key_.end() ? nullptr : &records_[it->second];
}

std::span<const std::size_t> EpcIndex::by_postcode(std::string_view postcode) const {
    auto it = by_postcode_.find(postcode);
    if (it == by_postcode_.end()) {
        return {};
    }
    return it->second;
}

std::span<const std::size_t> EpcIndex::by_outward(std::string_view outward) const {
    auto it = by_outward_.find(outward);
    if (it == by_outward_.end()) {
        return {};
    }
    return it->second;
}

std::string EpcIndex::fingerprint() const {
    return content_hash(snapshot_json(records_).dump());
}

void EpcIndex::save_snapshot(const std::filesystem::path& path) const {
    write_file(path, snapshot_json(records_).dump() + "\n");
}

EpcIndex EpcIndex::load_snapshot(const std::filesystem::path& path) {
    Json j;
    try {
        j = Json::parse(read_file(path));
        if (j.at("version").get<int>() != kSnapshotVersion) {
            fail(ErrorCode::Parse, "unsupported index snapshot version in " + path.string());
        }
        return EpcIndex(j.at("records").get<std::vector<EpcRecord>>());
    } catch (const Json::exception& e) {
        fail(ErrorCode::Parse, "malformed index snapshot " + path.string() + ": " + e.what());
    }
}

}  // namespace ecograde
