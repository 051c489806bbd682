#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ecograde/core/model.hpp"

namespace ecograde {

/// Deduplicated certificates, addressable by property, full postcode and
/// outward postcode. Immutable once built.
class EpcIndex {
public:
    EpcIndex() = default;

    /// Throws Error(ContractViolation) if two records share a property key.
    explicit EpcIndex(std::vector<EpcRecord> records);

    const std::vector<EpcRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }

    const EpcRecord* find(std::string_view address_key, std::string_view postcode) const;

    /// Record positions sharing a full postcode / outward code; empty if none.
    std::span<const std::size_t> by_postcode(std::string_view postcode) const;
    std::span<const std::size_t> by_outward(std::string_view outward) const;

    /// Hash over the canonical snapshot form.
    std::string fingerprint() const;

    void save_snapshot(const std::filesystem::path& path) const;
    static EpcIndex load_snapshot(const std::filesystem::path& path);

private:
    std::vector<EpcRecord> records_;  // sorted by property key
    std::unordered_map<std::string, std::size_t> by_key_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> by_postcode_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> by_outward_;
};

}  // namespace ecograde
