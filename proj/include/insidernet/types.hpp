#pragma once

#include "date.hpp"
#include "decimal.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace insidernet {

enum class Side : std::uint8_t { Purchase, Sale };

inline std::string_view to_string(Side s) { return s == Side::Purchase ? "purchase" : "sale"; }
inline char side_code(Side s) { return s == Side::Purchase ? 'P' : 'S'; }

inline std::optional<Side> parse_side(std::string_view s) {
    if (s == "purchase" || s == "P")
        return Side::Purchase;
    if (s == "sale" || s == "S")
        return Side::Sale;
    return std::nullopt;
}

struct TradeRecord {
    std::string insider_id;
    std::string insider_name;
    std::string company;
    Date date;
    Side side = Side::Purchase;
    std::int64_t shares = 0;
    std::optional<Decimal> price;

    friend bool operator==(const TradeRecord&, const TradeRecord&) = default;
};

struct DailyQuote {
    std::string company;
    Date date;
    Decimal close;
    std::int64_t volume = 0;

    friend bool operator==(const DailyQuote&, const DailyQuote&) = default;
};

/// Sorted, duplicate-free trading dates of one insider in one company on one side.
struct DateSequence {
    std::string insider_id;
    std::string company;
    Side side = Side::Purchase;
    std::vector<Date> dates;
    /// Number of trades before date deduplication.
    std::size_t trade_count = 0;

    auto key() const { return std::tie(insider_id, company, side); }
    friend bool operator==(const DateSequence&, const DateSequence&) = default;
};

struct RowError {
    std::size_t line = 0;
    std::string reason;

    friend bool operator==(const RowError&, const RowError&) = default;
};

} // namespace insidernet
