#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ecograde/core/serialize.hpp"

namespace ecograde {

struct BedroomRow {
    double area_low = 0.0;   // m², inclusive
    double area_high = 0.0;  // m², exclusive
    int bedrooms = 0;        // 0 = studio
};

/// Per-city floor-area bands used to turn certificate floor areas into a
/// probable bedroom count. City names are matched case-insensitively.
class BedroomLookupTable {
public:
    /// Throws Error(Config) unless rows are sorted, contiguous, non-empty
    /// intervals with bedrooms in [0,5].
    void add_city(std::string_view city, std::vector<BedroomRow> rows);

    bool has_city(std::string_view city) const;

    /// Throws Error(UnknownCity) or Error(OutOfRange).
    int infer(double floor_area, std::string_view city) const;

    const std::vector<BedroomRow>& rows(std::string_view city) const;

    std::pair<double, double> span(std::string_view city) const;

    std::vector<std::string> cities() const;

    /// Illustrative defaults for ten UK cities (configuration, not survey data).
    static BedroomLookupTable defaults();

private:
    std::map<std::string, std::pair<std::string, std::vector<BedroomRow>>> cities_;
};

int infer_bedrooms(double floor_area, std::string_view city, const BedroomLookupTable& table);

void to_json(Json& j, const BedroomLookupTable& table);
void from_json(const Json& j, BedroomLookupTable& table);

}  // namespace ecograde
