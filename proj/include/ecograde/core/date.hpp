#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace ecograde {

/// Calendar date; ISO-8601 "YYYY-MM-DD" on the wire.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    /// Accepts "YYYY-MM-DD", optionally followed by a time part ("T..." or " ...").
    static std::optional<Date> parse(std::string_view text) noexcept;
    std::string iso() const;
};

/// Calendar month, "YYYY-MM" on the wire.
struct YearMonth {
    int year = 1970;
    int month = 1;

    auto operator<=>(const YearMonth&) const = default;

    static std::optional<YearMonth> parse(std::string_view text) noexcept;
    std::string iso() const;
};

bool is_valid_date(int year, int month, int day) noexcept;

}  // namespace ecograde
