#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "ecograde/core/error.hpp"

namespace ecograde {

template <typename T>
std::vector<T> read_json_lines(std::istream& in) {
    std::vector<T> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            out.push_back(Json::parse(line).get<T>());
        } catch (const Json::exception& e) {
            fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            fail(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (in.bad()) {
        fail(ErrorCode::Io, "read failure");
    }
    return out;
}

template <typename T>
void write_json_lines(std::ostream& out, const std::vector<T>& items) {
    for (const auto& item : items) {
        out << Json(item).dump() << '\n';
    }
}

}  // namespace ecograde
