#include "ecograde/ingest/bedrooms.hpp"

#include <cctype>

#include "ecograde/core/error.hpp"

namespace ecograde {
namespace {

std::string city_key(std::string_view city) {
    std::string out;
    for (char c : city) {
        out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    return out;
}

}  // namespace

void BedroomLookupTable::add_city(std::string_view city, std::vector<BedroomRow> rows) {
    if (rows.empty()) {
        fail(ErrorCode::Config, "bedroom table for " + std::string(city) + " has no rows");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (!(r.area_low < r.area_high) || r.area_low < 0.0) {
            fail(ErrorCode::Config, "bedroom table row with empty area range in " + std::string(city));
        }
        if (r.bedrooms < 0 || r.bedrooms > 5) {
            fail(ErrorCode::Config, "bedrooms outside [0,5] in " + std::string(city));
        }
        if (i > 0 && rows[i - 1].area_high != r.area_low) {
            fail(ErrorCode::Config, "bedroom table rows must be sorted and contiguous in " + std::string(city));
        }
    }
    cities_[city_key(city)] = {std::string(city), std::move(rows)};
}

bool BedroomLookupTable::has_city(std::string_view city) const {
    return cities_.count(city_key(city)) > 0;
}

const std::vector<BedroomRow>& BedroomLookupTable::rows(std::string_view city) const {
    auto it = cities_.find(city_key(city));
    if (it == cities_.end()) {
        fail(ErrorCode::UnknownCity, "no bedroom table for city '" + std::string(city) + "'");
    }
    return it->second.second;
}

std::pair<double, double> BedroomLookupTable::span(std::string_view city) const {
    const auto& r = rows(city);
    return {r.front().area_low, r.back().area_high};
}

int BedroomLookupTable::infer(double floor_area, std::string_view city) const {
    for (const auto& row : rows(city)) {
        if (floor_area >= row.area_low && floor_area < row.area_high) {
            return row.bedrooms;
        }
    }
    fail(ErrorCode::OutOfRange, "floor area " + std::to_string(floor_area) + " outside table for " +
                                    std::string(city));
}

std::vector<std::string> BedroomLookupTable::cities() const {
    std::vector<std::string> out;
    for (const auto& [key, entry] : cities_) {
        out.push_back(entry.first);
    }
    return out;
}

BedroomLookupTable BedroomLookupTable::defaults() {
    // Upper bounds of studio, 1..4 bed; 5-bed runs to 1000 m².
    struct CityBounds {
        const char* city;
        double b[5];
    };
    static constexpr CityBounds kCities[] = {
        {"Birmingham", {37, 56, 82, 112, 150}},
        {"Bristol", {37, 55, 80, 110, 150}},
        {"Cardiff", {37, 57, 83, 114, 155}},
        {"Edinburgh", {37, 55, 80, 110, 150}},
        {"Glasgow", {37, 56, 81, 112, 152}},
        {"London", {37, 52, 75, 100, 140}},
        {"Manchester", {37, 55, 80, 110, 150}},
        {"Milton Keynes", {37, 58, 85, 118, 160}},
        {"Newcastle", {37, 56, 82, 112, 152}},
        {"Nottingham", {37, 56, 82, 112, 152}},
    };
    BedroomLookupTable table;
    for (const auto& c : kCities) {
        std::vector<BedroomRow> rows;
        double low = 0.0;
        for (int beds = 0; beds < 5; ++beds) {
            rows.push_back({low, c.b[beds], beds});
            low = c.b[beds];
        }
        rows.push_back({low, 1000.0, 5});
        table.add_city(c.city, std::move(rows));
    }
    return table;
}

int infer_bedrooms(double floor_area, std::string_view city, const BedroomLookupTable& table) {
    return table.infer(floor_area, city);
}

void to_json(Json& j, const BedroomLookupTable& table) {
    j = Json::object();
    for (const auto& city : table.cities()) {
        Json rows = Json::array();
        for (const auto& r : table.rows(city)) {
            rows.push_back(Json{{"area_low", r.area_low}, {"area_high", r.area_high}, {"bedrooms", r.bedrooms}});
        }
        j[city] = std::move(rows);
    }
}

void from_json(const Json& j, BedroomLookupTable& table) {
    table = BedroomLookupTable{};
    for (const auto& [city, rows_json] : j.items()) {
        std::vector<BedroomRow> rows;
        for (const auto& r : rows_json) {
            rows.push_back({r.at("area_low").get<double>(), r.at("area_high").get<double>(),
                            r.at("bedrooms").get<int>()});
        }
        table.add_city(city, std::move(rows));
    }
}

}  // namespace ecograde
