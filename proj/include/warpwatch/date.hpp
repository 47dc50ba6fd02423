#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "warpwatch/errors.hpp"

namespace warpwatch {

/// Calendar day stored as days since 1970-01-01. No time zones anywhere.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::int64_t epoch_day) : day_(epoch_day) {}

    static Date from_ymd(int year, unsigned month, unsigned day) {
        const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                              std::chrono::day{day}};
        if (!ymd.ok()) {
            throw ParseError("invalid calendar date " + std::to_string(year) + "-" +
                             std::to_string(month) + "-" + std::to_string(day));
        }
        return Date(std::chrono::sys_days{ymd}.time_since_epoch().count());
    }

    /// Strict `YYYY-MM-DD`.
    static Date parse(std::string_view text) {
        auto digits = [&](std::size_t from, std::size_t count) {
            int v = 0;
            for (std::size_t k = from; k < from + count; ++k) {
                const char c = text[k];
                if (c < '0' || c > '9') {
                    throw ParseError("malformed date '" + std::string(text) + "', expected YYYY-MM-DD");
                }
                v = v * 10 + (c - '0');
            }
            return v;
        };
        if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
            throw ParseError("malformed date '" + std::string(text) + "', expected YYYY-MM-DD");
        }
        const int y = digits(0, 4);
        const int m = digits(5, 2);
        const int d = digits(8, 2);
        return from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
    }

    std::string iso() const {
        const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{day_}}};
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
        return buf;
    }

    constexpr std::int64_t epoch_day() const noexcept { return day_; }

    constexpr Date operator+(std::int64_t days) const noexcept { return Date(day_ + days); }
    constexpr Date operator-(std::int64_t days) const noexcept { return Date(day_ - days); }
    constexpr std::int64_t operator-(Date other) const noexcept { return day_ - other.day_; }

    constexpr auto operator<=>(const Date&) const = default;

private:
    std::int64_t day_ = 0;
};

}  // namespace warpwatch
