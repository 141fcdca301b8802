#pragma once

// Trade and quote file parsing, plus grouping of trades into per-company
// date sequences.
//
//   trades: insider_id,insider_name,company,date,side,shares,price
//   quotes: company,date,close,volume

#include "csv.hpp"
#include "error.hpp"
#include "types.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace insidernet {

inline constexpr std::string_view kTradesHeader = "insider_id,insider_name,company,date,side,shares,price";
inline constexpr std::string_view kQuotesHeader = "company,date,close,volume";

struct IngestConfig {
    bool strict = false;
};

struct TradeParseResult {
    std::vector<TradeRecord> trades;
    std::vector<RowError> errors;
};

struct QuoteParseResult {
    std::vector<DailyQuote> quotes;
    std::vector<RowError> errors;
};

namespace detail {

inline bool parse_positive_int(std::string_view s, std::int64_t& out) {
    if (s.empty())
        return false;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

inline std::vector<std::string> checked_lines(std::istream& in, std::string_view header, std::string_view what) {
    if (!in)
        throw Error(ErrorCode::UnreadableStream, std::string(what) + " stream is not readable");
    auto lines = csv::read_lines(in);
    if (in.bad())
        throw Error(ErrorCode::UnreadableStream, std::string(what) + " stream read failed");
    if (lines.empty() || lines.front() != header)
        throw Error(ErrorCode::UnreadableStream,
                    std::string(what) + " file must start with header `" + std::string(header) + "`");
    return lines;
}

} // namespace detail

inline TradeParseResult parse_trades(std::istream& in, const IngestConfig& config = {}) {
    const auto lines = detail::checked_lines(in, kTradesHeader, "trades");
    TradeParseResult result;
    std::vector<std::string> f;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (lines[i].empty())
            continue;
        auto fail = [&](std::string reason) { result.errors.push_back({line_no, std::move(reason)}); };
        if (!csv::split_line(lines[i], f)) {
            fail("unterminated quote");
            continue;
        }
        if (f.size() != 7) {
            fail("wrong field count");
            continue;
        }
        TradeRecord t;
        t.insider_id = f[0];
        t.insider_name = f[1];
        t.company = f[2];
        if (t.insider_id.empty()) {
            fail("empty insider_id");
            continue;
        }
        if (t.company.empty()) {
            fail("empty company");
            continue;
        }
        auto date = Date::parse(f[3]);
        if (!date) {
            fail("invalid date");
            continue;
        }
        t.date = *date;
        if (f[4] == "P")
            t.side = Side::Purchase;
        else if (f[4] == "S")
            t.side = Side::Sale;
        else {
            fail("invalid side");
            continue;
        }
        if (!detail::parse_positive_int(f[5], t.shares)) {
            fail("invalid shares");
            continue;
        }
        if (t.shares <= 0) {
            fail("non-positive shares");
            continue;
        }
        if (!f[6].empty()) {
            auto price = Decimal::parse(f[6]);
            if (!price) {
                fail("invalid price");
                continue;
            }
            t.price = *price;
        }
        result.trades.push_back(std::move(t));
    }
    if (config.strict && !result.errors.empty()) {
        const auto& e = result.errors.front();
        throw Error(ErrorCode::StrictModeViolation,
                    std::to_string(result.errors.size()) + " malformed row(s); first at line " +
                        std::to_string(e.line) + ": " + e.reason);
    }
    return result;
}

/// Duplicate (company, date) rows keep the first occurrence.
inline QuoteParseResult parse_quotes(std::istream& in) {
    const auto lines = detail::checked_lines(in, kQuotesHeader, "quotes");
    QuoteParseResult result;
    std::set<std::pair<std::string, Date>> seen;
    std::vector<std::string> f;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (lines[i].empty())
            continue;
        auto fail = [&](std::string reason) { result.errors.push_back({line_no, std::move(reason)}); };
        if (!csv::split_line(lines[i], f)) {
            fail("unterminated quote");
            continue;
        }
        if (f.size() != 4) {
            fail("wrong field count");
            continue;
        }
        DailyQuote q;
        q.company = f[0];
        if (q.company.empty()) {
            fail("empty company");
            continue;
        }
        auto date = Date::parse(f[1]);
        if (!date) {
            fail("invalid date");
            continue;
        }
        q.date = *date;
        auto close = Decimal::parse(f[2]);
        if (!close) {
            fail("invalid close");
            continue;
        }
        if (close->is_zero()) {
            fail("non-positive close");
            continue;
        }
        q.close = *close;
        if (!detail::parse_positive_int(f[3], q.volume)) {
            fail("invalid volume");
            continue;
        }
        if (q.volume <= 0) {
            fail("non-positive volume");
            continue;
        }
        if (!seen.emplace(q.company, q.date).second) {
            fail("duplicate quote");
            continue;
        }
        result.quotes.push_back(std::move(q));
    }
    return result;
}

inline std::string serialize_trades(const std::vector<TradeRecord>& trades) {
    std::string out(kTradesHeader);
    out += '\n';
    for (const auto& t : trades) {
        out += csv::quote(t.insider_id);
        out += ',';
        out += csv::quote(t.insider_name);
        out += ',';
        out += csv::quote(t.company);
        out += ',';
        out += t.date.to_string();
        out += ',';
        out += side_code(t.side);
        out += ',';
        out += std::to_string(t.shares);
        out += ',';
        if (t.price)
            out += t.price->to_string();
        out += '\n';
    }
    return out;
}

inline std::string serialize_quotes(const std::vector<DailyQuote>& quotes) {
    std::string out(kQuotesHeader);
    out += '\n';
    for (const auto& q : quotes) {
        out += csv::quote(q.company);
        out += ',';
        out += q.date.to_string();
        out += ',';
        out += q.close.to_string();
        out += ',';
        out += std::to_string(q.volume);
        out += '\n';
    }
    return out;
}

/// Groups trades by (insider, company, side), keeps groups with at least
/// `min_trades` trades, and deduplicates their dates. Output is sorted by
/// (insider_id, company, side).
inline std::vector<DateSequence> build_date_sequences(const std::vector<TradeRecord>& trades,
                                                      std::size_t min_trades = 5) {
    if (min_trades < 1)
        throw Error(ErrorCode::InvalidConfig, "min_trades must be at least 1");
    std::map<std::tuple<std::string, std::string, Side>, DateSequence> groups;
    for (const auto& t : trades) {
        auto& seq = groups[{t.insider_id, t.company, t.side}];
        if (seq.trade_count == 0) {
            seq.insider_id = t.insider_id;
            seq.company = t.company;
            seq.side = t.side;
        }
        seq.dates.push_back(t.date);
        ++seq.trade_count;
    }
    std::vector<DateSequence> out;
    for (auto& [key, seq] : groups) {
        if (seq.trade_count < min_trades)
            continue;
        std::sort(seq.dates.begin(), seq.dates.end());
        seq.dates.erase(std::unique(seq.dates.begin(), seq.dates.end()), seq.dates.end());
        out.push_back(std::move(seq));
    }
    return out;
}

inline std::vector<DateSequence> sequences_for_side(const std::vector<DateSequence>& all, Side side) {
    std::vector<DateSequence> out;
    std::copy_if(all.begin(), all.end(), std::back_inserter(out),
                 [side](const DateSequence& s) { return s.side == side; });
    return out;
}

} // namespace insidernet
