#include "ecograde/core/model.hpp"

#include <cmath>

namespace ecograde {

std::size_t EpcRecord::band_count() const noexcept {
    std::size_t n = 0;
    for (const auto& b : bands) {
        n += b.has_value() ? 1 : 0;
    }
    return n;
}

std::string_view to_string(Factor factor) noexcept {
    switch (factor) {
        case Factor::Consumption: return "consumption";
        case Factor::Efficiency: return "efficiency";
        case Factor::Supplier: return "supplier";
        case Factor::Transport: return "transport";
    }
    return "unknown";
}

std::optional<Factor> parse_factor(std::string_view name) noexcept {
    for (Factor f : kAllFactors) {
        if (to_string(f) == name) {
            return f;
        }
    }
    return std::nullopt;
}

std::string_view to_string(ProvenanceKind kind) noexcept {
    switch (kind) {
        case ProvenanceKind::Direct: return "direct";
        case ProvenanceKind::Interpolated: return "interpolated";
        case ProvenanceKind::Meter: return "meter";
        case ProvenanceKind::None: return "none";
    }
    return "unknown";
}

std::optional<ProvenanceKind> parse_provenance_kind(std::string_view name) noexcept {
    for (auto k : {ProvenanceKind::Direct, ProvenanceKind::Interpolated, ProvenanceKind::Meter,
                   ProvenanceKind::None}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

int leaves_for(double overall, LeafRounding rounding) noexcept {
    double v = rounding == LeafRounding::HalfUp ? std::floor(overall + 0.5) : std::floor(overall);
    if (v < 0.0) return 0;
    if (v > 5.0) return 5;
    return static_cast<int>(v);
}

}  // namespace ecograde
