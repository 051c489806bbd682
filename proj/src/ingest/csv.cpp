#include "ecograde/ingest/csv.hpp"

#include "ecograde/core/error.hpp"

namespace ecograde {

bool CsvReader::next(std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    record_line_ = line_;

    for (;;) {
        int c = in_.get();
        if (c == std::char_traits<char>::eof()) {
            if (in_.bad()) {
                fail(ErrorCode::Io, "read failure");
            }
            if (!any) {
                return false;
            }
            fields.push_back(std::move(field));
            return true;
        }
        any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') {
                    ++line_;
                }
                field.push_back(static_cast<char>(c));
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                break;
            case ',':
                fields.push_back(std::move(field));
                field.clear();
                break;
            case '\r':
                break;
            case '\n':
                ++line_;
                fields.push_back(std::move(field));
                return true;
            default:
                field.push_back(static_cast<char>(c));
        }
    }
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) {
            out.push_back(',');
        }
        out += csv_escape(fields[i]);
    }
    return out;
}

}  // namespace ecograde
