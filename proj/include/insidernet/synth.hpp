#pragma once

// Synthetic trade datasets with planted co-trading groups and bridging hubs.
//
// Randomness: every stream is an mt19937_64 seeded with splitmix64 of
// (seed, stream kind, index), so each company, clique and hub draws from its
// own generator and results do not depend on generation order or threading.
//   kind 1: background insiders of company c
//   kind 2: planted clique i
//   kind 3: planted hub j (and hub placement)
// Quotes are a pure hash of (seed, company, date).

#include "error.hpp"
#include "ingest.hpp"
#include "parallel.hpp"
#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <nlohmann/json.hpp>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace insidernet {

struct IntRange {
    std::size_t lo = 0;
    std::size_t hi = 0;

    bool valid() const { return lo <= hi; }
};

enum class PlantedSide : std::uint8_t { Sale, Purchase, Alternate };

/// How members of a planted clique share dates.
enum class CliqueLayout : std::uint8_t {
    SharedSequence,    ///< one sequence traded by every member (a single hyperedge)
    PairwiseSequences, ///< a distinct sequence per member pair (pairwise edges only)
};

struct SynthConfig {
    std::uint64_t seed = 42;
    std::size_t n_companies = 60;
    IntRange insiders_per_company{3, 6};
    IntRange trades_per_insider{4, 12};
    Date date_start = *Date::parse("2012-01-02");
    Date date_end = *Date::parse("2015-12-31");
    std::size_t n_planted_cliques = 12;
    IntRange clique_size{4, 8};
    std::size_t shared_subsequence_length = 10;
    IntRange clique_extra_trades{0, 3};
    CliqueLayout clique_layout = CliqueLayout::SharedSequence;
    std::size_t n_planted_hubs = 2;
    std::size_t cliques_per_hub = 3;
    PlantedSide planted_side = PlantedSide::Alternate;
    /// Probability a planted-group trade is priced favourably against the close.
    double profit_bias = 0.8;
    double background_sale_fraction = 0.7;
    double missing_price_rate = 0.05;
};

struct PlantedClique {
    std::string id;
    std::string company;
    Side side = Side::Sale;
    std::vector<std::string> members;
    std::vector<Date> dates; ///< shared sequence (SharedSequence layout) or union of pair sequences
};

struct PlantedHub {
    std::string id;
    std::vector<std::string> cliques;
    std::vector<std::string> companies;
};

struct GroundTruth {
    std::vector<PlantedClique> cliques;
    std::vector<PlantedHub> hubs;
};

struct SynthDataset {
    std::uint64_t seed = 0;
    double profit_bias = 0.5;
    double missing_price_rate = 0.0;
    std::vector<TradeRecord> trades;
    std::vector<DailyQuote> quotes;
    GroundTruth truth;

    std::string trades_csv() const { return serialize_trades(trades); }
    std::string quotes_csv() const { return serialize_quotes(quotes); }
    std::string truth_json() const;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t kind, std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(seed) ^ kind) ^ index);
}

inline std::uint64_t hash_string(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s)
        h = (h ^ c) * 0x100000001b3ull;
    return h;
}

inline std::size_t draw(std::mt19937_64& rng, IntRange r) {
    return std::uniform_int_distribution<std::size_t>(r.lo, r.hi)(rng);
}

inline std::string numbered(const char* prefix, std::size_t a, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, a);
    return buf;
}

inline std::vector<Date> weekdays(Date start, Date end) {
    std::vector<Date> out;
    for (Date d = start; d <= end; d = d + 1)
        if (d.weekday() != 0 && d.weekday() != 6)
            out.push_back(d);
    return out;
}

/// `count` distinct calendar entries, sorted.
inline std::vector<Date> sample_dates(std::mt19937_64& rng, const std::vector<Date>& calendar, std::size_t count) {
    std::vector<Date> out;
    std::sample(calendar.begin(), calendar.end(), std::back_inserter(out), static_cast<std::ptrdiff_t>(count), rng);
    return out;
}

inline DailyQuote quote_for(std::uint64_t seed, const std::string& company, Date date) {
    const std::uint64_t h = splitmix64(stream_seed(seed, 4, hash_string(company)) ^ static_cast<std::uint64_t>(date.days()));
    const std::uint64_t h2 = splitmix64(h);
    return {company, date, Decimal(static_cast<std::int64_t>(1000 + h % 9000), 2),
            static_cast<std::int64_t>(200000 + h2 % 4800000)};
}

// Price relative to the close: favourable (profit for the insider) or not.
inline std::optional<Decimal> draw_price(std::mt19937_64& rng, const DailyQuote& q, Side side, double favourable_p,
                                         double missing_rate) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const bool favourable = unit(rng) < favourable_p;
    const double spread = 0.01 + 0.04 * unit(rng);
    const bool missing = unit(rng) < missing_rate;
    if (missing)
        return std::nullopt;
    // Purchase below close or sale above close is a profit.
    const bool below = (side == Side::Purchase) == favourable;
    const double close = q.close.to_double();
    return Decimal::from_double(close * (below ? 1.0 - spread : 1.0 + spread), 2);
}

inline void add_trade(std::vector<TradeRecord>& out, std::mt19937_64& rng, std::uint64_t seed, const std::string& insider,
                      const std::string& name, const std::string& company, Side side, Date date, double favourable_p,
                      double missing_rate) {
    const DailyQuote q = quote_for(seed, company, date);
    TradeRecord t;
    t.insider_id = insider;
    t.insider_name = name;
    t.company = company;
    t.date = date;
    t.side = side;
    t.shares = static_cast<std::int64_t>(std::uniform_int_distribution<int>(100, 5000)(rng));
    t.price = draw_price(rng, q, side, favourable_p, missing_rate);
    out.push_back(std::move(t));
}

inline void finalize(SynthDataset& ds) {
    std::sort(ds.trades.begin(), ds.trades.end(), [](const TradeRecord& a, const TradeRecord& b) {
        return std::tie(a.insider_id, a.company, a.date, a.side, a.shares) <
               std::tie(b.insider_id, b.company, b.date, b.side, b.shares);
    });
    std::set<std::pair<std::string, Date>> needed;
    for (const auto& t : ds.trades)
        needed.emplace(t.company, t.date);
    ds.quotes.clear();
    for (const auto& [company, date] : needed)
        ds.quotes.push_back(quote_for(ds.seed, company, date));
}

} // namespace detail

inline std::string company_ticker(std::size_t index) { return detail::numbered("C", index + 1, 4); }

/// Adds `hub_id` as a bridge: it trades each listed clique's shared dates in
/// that clique's company, so it links to every member of every listed clique.
inline SynthDataset plant_hub(SynthDataset dataset, const std::string& hub_id, const std::vector<std::string>& clique_ids) {
    if (clique_ids.empty())
        throw Error(ErrorCode::InfeasibleConfig, "a hub needs at least one clique");
    std::vector<const PlantedClique*> cliques;
    for (const auto& id : clique_ids) {
        auto it = std::find_if(dataset.truth.cliques.begin(), dataset.truth.cliques.end(),
                               [&](const PlantedClique& c) { return c.id == id; });
        if (it == dataset.truth.cliques.end())
            throw Error(ErrorCode::UnknownClique, id);
        cliques.push_back(&*it);
    }
    const bool member_of_all = std::all_of(cliques.begin(), cliques.end(), [&](const PlantedClique* c) {
        return std::find(c->members.begin(), c->members.end(), hub_id) != c->members.end();
    });
    if (member_of_all)
        throw Error(ErrorCode::InfeasibleConfig, hub_id + " is already a member of every listed clique");
    std::set<std::string> companies;
    for (const auto* c : cliques) {
        if (c->side != cliques.front()->side)
            throw Error(ErrorCode::InfeasibleConfig, "hub cliques must share one side");
        if (!companies.insert(c->company).second)
            throw Error(ErrorCode::InfeasibleConfig, "hub cliques must lie in distinct companies");
    }

    std::mt19937_64 rng(detail::stream_seed(dataset.seed, 3, detail::hash_string(hub_id)));
    PlantedHub hub{hub_id, clique_ids, {}};
    for (const auto* c : cliques) {
        for (Date d : c->dates)
            detail::add_trade(dataset.trades, rng, dataset.seed, hub_id, "Hub " + hub_id, c->company, c->side, d,
                              dataset.profit_bias, dataset.missing_price_rate);
        hub.companies.push_back(c->company);
    }
    dataset.truth.hubs.push_back(std::move(hub));
    detail::finalize(dataset);
    return dataset;
}

inline SynthDataset generate(const SynthConfig& config, std::size_t threads = 1) {
    auto infeasible = [](const std::string& why) { throw Error(ErrorCode::InfeasibleConfig, why); };
    if (!config.insiders_per_company.valid() || !config.trades_per_insider.valid() || !config.clique_size.valid() ||
        !config.clique_extra_trades.valid())
        infeasible("empty range");
    if (config.date_end < config.date_start)
        infeasible("date_end precedes date_start");
    if (config.n_planted_cliques > config.n_companies)
        infeasible("each planted clique needs its own company");
    if (config.n_planted_cliques > 0 && (config.clique_size.lo < 2 || config.shared_subsequence_length < 1))
        infeasible("cliques need at least two members and a non-empty shared sequence");
    if (!(config.profit_bias >= 0.0 && config.profit_bias <= 1.0))
        infeasible("profit_bias must lie in [0, 1]");

    const auto calendar = detail::weekdays(config.date_start, config.date_end);
    const std::size_t max_pairs = config.clique_size.hi * (config.clique_size.hi - 1) / 2;
    const std::size_t needed_dates = config.clique_layout == CliqueLayout::SharedSequence
                                         ? config.shared_subsequence_length
                                         : max_pairs * config.shared_subsequence_length;
    if (config.n_planted_cliques > 0 && calendar.size() < needed_dates)
        infeasible("date span has fewer trading days than the planted sequences need");
    if (calendar.size() < config.trades_per_insider.hi)
        infeasible("date span shorter than trades_per_insider");

    SynthDataset ds;
    ds.seed = config.seed;
    ds.profit_bias = config.profit_bias;
    ds.missing_price_rate = config.missing_price_rate;

    // Background insiders: independent weekday draws (with repeats) per company.
    std::vector<std::vector<TradeRecord>> background(config.n_companies);
    parallel_for(config.n_companies, threads, [&](std::size_t c) {
        std::mt19937_64 rng(detail::stream_seed(config.seed, 1, c));
        const std::string company = company_ticker(c);
        const std::size_t n = detail::draw(rng, config.insiders_per_company);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t j = 0; j < n; ++j) {
            const std::string id = "B" + company.substr(1) + "-" + detail::numbered("", j + 1, 2);
            const Side side = unit(rng) < config.background_sale_fraction ? Side::Sale : Side::Purchase;
            const std::size_t trades = detail::draw(rng, config.trades_per_insider);
            std::uniform_int_distribution<std::size_t> pick(0, calendar.size() - 1);
            for (std::size_t k = 0; k < trades; ++k)
                detail::add_trade(background[c], rng, config.seed, id, "Insider " + id, company, side,
                                  calendar[pick(rng)], 0.5, config.missing_price_rate);
        }
    });
    for (auto& b : background)
        ds.trades.insert(ds.trades.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));

    for (std::size_t i = 0; i < config.n_planted_cliques; ++i) {
        std::mt19937_64 rng(detail::stream_seed(config.seed, 2, i));
        PlantedClique clique;
        clique.id = detail::numbered("K", i + 1, 3);
        clique.company = company_ticker(i);
        clique.side = config.planted_side == PlantedSide::Sale       ? Side::Sale
                      : config.planted_side == PlantedSide::Purchase ? Side::Purchase
                                                                     : (i % 2 == 0 ? Side::Sale : Side::Purchase);
        const std::size_t size = detail::draw(rng, config.clique_size);
        for (std::size_t m = 0; m < size; ++m)
            clique.members.push_back(clique.id + "-" + detail::numbered("", m + 1, 2));

        std::vector<std::set<Date>> member_dates(size);
        if (config.clique_layout == CliqueLayout::SharedSequence) {
            clique.dates = detail::sample_dates(rng, calendar, config.shared_subsequence_length);
            for (auto& md : member_dates)
                md.insert(clique.dates.begin(), clique.dates.end());
        } else {
            const std::size_t pairs = size * (size - 1) / 2;
            auto pool = detail::sample_dates(rng, calendar, pairs * config.shared_subsequence_length);
            std::shuffle(pool.begin(), pool.end(), rng);
            std::size_t next = 0;
            for (std::size_t a = 0; a < size; ++a)
                for (std::size_t b = a + 1; b < size; ++b)
                    for (std::size_t k = 0; k < config.shared_subsequence_length; ++k) {
                        member_dates[a].insert(pool[next]);
                        member_dates[b].insert(pool[next]);
                        ++next;
                    }
            clique.dates = pool;
            std::sort(clique.dates.begin(), clique.dates.end());
        }
        std::uniform_int_distribution<std::size_t> pick(0, calendar.size() - 1);
        for (std::size_t m = 0; m < size; ++m) {
            const std::size_t extra = detail::draw(rng, config.clique_extra_trades);
            std::vector<Date> own(member_dates[m].begin(), member_dates[m].end());
            for (std::size_t k = 0; k < extra; ++k)
                own.push_back(calendar[pick(rng)]);
            for (Date d : own)
                detail::add_trade(ds.trades, rng, config.seed, clique.members[m], "Member " + clique.members[m],
                                  clique.company, clique.side, d, config.profit_bias, config.missing_price_rate);
        }
        ds.truth.cliques.push_back(std::move(clique));
    }

    detail::finalize(ds);

    // Hubs take disjoint sets of same-side cliques, chosen by a seeded shuffle.
    std::mt19937_64 placement(detail::stream_seed(config.seed, 3, 0));
    std::map<Side, std::vector<std::string>> available;
    for (const auto& c : ds.truth.cliques)
        available[c.side].push_back(c.id);
    for (auto& [side, ids] : available)
        std::shuffle(ids.begin(), ids.end(), placement);
    for (std::size_t j = 0; j < config.n_planted_hubs; ++j) {
        Side side = config.planted_side == PlantedSide::Sale       ? Side::Sale
                    : config.planted_side == PlantedSide::Purchase ? Side::Purchase
                                                                   : (j % 2 == 0 ? Side::Sale : Side::Purchase);
        auto& pool = available[side];
        if (pool.size() < config.cliques_per_hub)
            infeasible("not enough planted cliques for the requested hubs");
        std::vector<std::string> chosen(pool.end() - static_cast<std::ptrdiff_t>(config.cliques_per_hub), pool.end());
        pool.resize(pool.size() - config.cliques_per_hub);
        std::sort(chosen.begin(), chosen.end());
        ds = plant_hub(std::move(ds), detail::numbered("H", j + 1, 3), chosen);
    }
    return ds;
}

inline std::string SynthDataset::truth_json() const {
    nlohmann::json j;
    j["cliques"] = nlohmann::json::array();
    for (const auto& c : truth.cliques) {
        nlohmann::json dates = nlohmann::json::array();
        for (Date d : c.dates)
            dates.push_back(d.to_string());
        j["cliques"].push_back({{"id", c.id},
                                {"company", c.company},
                                {"side", std::string(to_string(c.side))},
                                {"members", c.members},
                                {"dates", dates}});
    }
    j["hubs"] = nlohmann::json::array();
    for (const auto& h : truth.hubs)
        j["hubs"].push_back({{"id", h.id}, {"cliques", h.cliques}, {"companies", h.companies}});
    return j.dump(2) + "\n";
}

/// Probability that two independent insiders with `a` and `b` distinct dates
/// drawn uniformly from `calendar_days` share at least `t` dates
/// (hypergeometric upper tail).
inline double spurious_pair_probability(std::size_t calendar_days, std::size_t a, std::size_t b, std::size_t t) {
    auto log_choose = [](double n, double k) { return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1); };
    const double n = static_cast<double>(calendar_days);
    double p = 0.0;
    for (std::size_t x = t; x <= std::min(a, b); ++x) {
        if (b - x > calendar_days - a)
            continue;
        p += std::exp(log_choose(static_cast<double>(a), static_cast<double>(x)) +
                      log_choose(n - static_cast<double>(a), static_cast<double>(b - x)) -
                      log_choose(n, static_cast<double>(b)));
    }
    return p;
}

} // namespace insidernet
