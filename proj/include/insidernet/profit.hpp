#pragma once

#include "error.hpp"
#include "types.hpp"

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace insidernet {

struct ProfitPoint {
    std::string insider_id;
    std::string company;
    Date date;
    Side side = Side::Purchase;
    double amount = 0.0;

    friend bool operator==(const ProfitPoint&, const ProfitPoint&) = default;
};

/// Same-day close and volume keyed by (company, date).
class QuoteBook {
public:
    QuoteBook() = default;
    explicit QuoteBook(std::span<const DailyQuote> quotes) {
        for (const auto& q : quotes)
            book_.emplace(std::pair{q.company, q.date}, q);
    }

    const DailyQuote* find(const std::string& company, Date date) const {
        auto it = book_.find(std::pair{company, date});
        return it == book_.end() ? nullptr : &it->second;
    }

private:
    std::map<std::pair<std::string, Date>, DailyQuote> book_;
};

/// s * (close - price) * shares / (close * volume), s = +1 for purchases and
/// -1 for sales, clamped to [-1, 1]. Positive means the trade beat the close.
inline double signed_normalized_amount(const TradeRecord& trade, const DailyQuote* quote) {
    if (!trade.price)
        throw Error(ErrorCode::MissingPrice, trade.insider_id + " " + trade.company + " " + trade.date.to_string());
    if (!quote || quote->company != trade.company || quote->date != trade.date)
        throw Error(ErrorCode::MissingQuote, trade.company + " " + trade.date.to_string());
    const double close = quote->close.to_double();
    const double price = trade.price->to_double();
    const double sign = trade.side == Side::Purchase ? 1.0 : -1.0;
    const double amount = sign * (close - price) * static_cast<double>(trade.shares) /
                          (close * static_cast<double>(quote->volume));
    return std::clamp(amount, -1.0, 1.0);
}

inline double signed_normalized_amount(const TradeRecord& trade, const DailyQuote& quote) {
    return signed_normalized_amount(trade, &quote);
}

struct ProfitSeries {
    std::vector<ProfitPoint> points;
    std::size_t considered = 0; ///< trades on the requested dates
    std::size_t skipped = 0;    ///< of those, lacking a price or a quote

    double skipped_fraction() const {
        return considered == 0 ? 0.0 : static_cast<double>(skipped) / static_cast<double>(considered);
    }
};

/// Priced trades of `insider` in (company, side) whose date is in `dates`
/// (sorted), in chronological order. Trades without price or quote are counted
/// as skipped.
inline ProfitSeries profit_series(const std::string& insider, const std::string& company, Side side,
                                  std::span<const Date> dates, std::span<const TradeRecord> trades,
                                  const QuoteBook& quotes) {
    ProfitSeries out;
    for (const auto& t : trades) {
        if (t.insider_id != insider || t.company != company || t.side != side)
            continue;
        if (!std::binary_search(dates.begin(), dates.end(), t.date))
            continue;
        ++out.considered;
        const DailyQuote* q = quotes.find(t.company, t.date);
        if (!t.price || !q) {
            ++out.skipped;
            continue;
        }
        out.points.push_back({t.insider_id, t.company, t.date, t.side, signed_normalized_amount(t, q)});
    }
    std::stable_sort(out.points.begin(), out.points.end(),
                     [](const ProfitPoint& a, const ProfitPoint& b) { return a.date < b.date; });
    return out;
}

/// Share of points with a strictly positive amount.
inline double majority_profit_fraction(std::span<const ProfitPoint> series) {
    if (series.empty())
        throw Error(ErrorCode::EmptySeries, "profit series is empty");
    const auto positive = std::count_if(series.begin(), series.end(), [](const ProfitPoint& p) { return p.amount > 0.0; });
    return static_cast<double>(positive) / static_cast<double>(series.size());
}

} // namespace insidernet
