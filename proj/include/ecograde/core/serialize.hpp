#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecograde/core/model.hpp"

namespace ecograde {

using Json = nlohmann::json;

void to_json(Json& j, const Date& d);
void from_json(const Json& j, Date& d);
void to_json(Json& j, const YearMonth& m);
void from_json(const Json& j, YearMonth& m);
void to_json(Json& j, const EpcRecord& r);
void from_json(const Json& j, EpcRecord& r);
void to_json(Json& j, const Tariff& t);
void from_json(const Json& j, Tariff& t);
void to_json(Json& j, const Listing& l);
void from_json(const Json& j, Listing& l);
void to_json(Json& j, const Provenance& p);
void from_json(const Json& j, Provenance& p);
void to_json(Json& j, const Co2Summary& c);
void from_json(const Json& j, Co2Summary& c);
void to_json(Json& j, const EcoGradeReport& r);
void from_json(const Json& j, EcoGradeReport& r);
void to_json(Json& j, const CityBaseline& b);
void from_json(const Json& j, CityBaseline& b);

/// Stable hash of a record's canonical JSON.
std::string fingerprint(const EpcRecord& record);

/// Reads one JSON value per non-blank line. Throws Error(Parse) with the line number.
template <typename T>
std::vector<T> read_json_lines(std::istream& in);

template <typename T>
void write_json_lines(std::ostream& out, const std::vector<T>& items);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace ecograde

#include "ecograde/core/serialize_impl.hpp"
