#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace insidernet {

/// Calendar date without time zone, stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

    static std::optional<Date> from_ymd(int y, unsigned m, unsigned d) {
        using namespace std::chrono;
        const year_month_day ymd{year{y}, month{m}, day{d}};
        if (!ymd.ok())
            return std::nullopt;
        return Date(static_cast<std::int32_t>(sys_days{ymd}.time_since_epoch().count()));
    }

    /// Strict `YYYY-MM-DD`.
    static std::optional<Date> parse(std::string_view s) {
        if (s.size() != 10 || s[4] != '-' || s[7] != '-')
            return std::nullopt;
        auto digits = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
            int v = 0;
            for (std::size_t i = pos; i < pos + len; ++i) {
                if (s[i] < '0' || s[i] > '9')
                    return std::nullopt;
                v = v * 10 + (s[i] - '0');
            }
            return v;
        };
        auto y = digits(0, 4), m = digits(5, 2), d = digits(8, 2);
        if (!y || !m || !d)
            return std::nullopt;
        return from_ymd(*y, static_cast<unsigned>(*m), static_cast<unsigned>(*d));
    }

    constexpr std::int32_t days() const noexcept { return days_; }

    std::chrono::year_month_day ymd() const {
        return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{days_}}};
    }

    /// 0 = Sunday ... 6 = Saturday.
    unsigned weekday() const {
        return std::chrono::weekday{std::chrono::sys_days{std::chrono::days{days_}}}.c_encoding();
    }

    std::string to_string() const {
        const auto v = ymd();
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(v.year()),
                      static_cast<unsigned>(v.month()), static_cast<unsigned>(v.day()));
        return buf;
    }

    constexpr Date operator+(std::int32_t n) const { return Date(days_ + n); }
    constexpr auto operator<=>(const Date&) const = default;

private:
    std::int32_t days_ = 0;
};

} // namespace insidernet
