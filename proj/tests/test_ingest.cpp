#include "test_util.hpp"

#include <gtest/gtest.h>

#include <map>
#include <sstream>

using namespace insidernet;
using testutil::day;

namespace {

const std::string kHeader = "insider_id,insider_name,company,date,side,shares,price\n";

TradeParseResult trades_from(const std::string& body, IngestConfig cfg = {}) {
    std::istringstream in(kHeader + body);
    return parse_trades(in, cfg);
}

QuoteParseResult quotes_from(const std::string& body) {
    std::istringstream in("company,date,close,volume\n" + body);
    return parse_quotes(in);
}

TradeRecord trade(std::string id, std::string company, Date d, Side side, std::int64_t shares = 100) {
    return {id, "Name " + id, company, d, side, shares, Decimal::parse("10.00")};
}

} // namespace

TEST(ParseTrades, WellFormedRow) {
    auto r = trades_from("I001,John Doe,ACME,2014-03-05,P,100,9.50\n");
    ASSERT_TRUE(r.errors.empty());
    ASSERT_EQ(r.trades.size(), 1u);
    const auto& t = r.trades[0];
    EXPECT_EQ(t.insider_id, "I001");
    EXPECT_EQ(t.insider_name, "John Doe");
    EXPECT_EQ(t.company, "ACME");
    EXPECT_EQ(t.date.to_string(), "2014-03-05");
    EXPECT_EQ(t.side, Side::Purchase);
    EXPECT_EQ(t.shares, 100);
    ASSERT_TRUE(t.price.has_value());
    EXPECT_EQ(t.price->to_string(), "9.50");
}

TEST(ParseTrades, InvalidDateIsRowError) {
    auto r = trades_from("I001,John Doe,ACME,2014-13-40,P,100,9.50\n");
    EXPECT_TRUE(r.trades.empty());
    ASSERT_EQ(r.errors.size(), 1u);
    EXPECT_EQ(r.errors[0].reason, "invalid date");
    EXPECT_EQ(r.errors[0].line, 2u);
}

TEST(ParseTrades, EmptyPriceIsAbsent) {
    auto r = trades_from("I001,John Doe,ACME,2014-03-05,S,100,\n");
    ASSERT_EQ(r.trades.size(), 1u);
    EXPECT_FALSE(r.trades[0].price.has_value());
    EXPECT_EQ(r.trades[0].side, Side::Sale);
}

TEST(ParseTrades, RowErrorsDoNotAbort) {
    auto r = trades_from("I001,A,ACME,2014-03-05,X,100,1\n"
                         "I001,A,ACME,2014-03-05,P,0,1\n"
                         "I001,A,ACME,2014-03-05,P,abc,1\n"
                         "I001,A,ACME,2014-03-05,P,10\n"
                         "I002,\"Doe, Jane\",ACME,2014-03-06,S,5,2.5\n");
    ASSERT_EQ(r.trades.size(), 1u);
    EXPECT_EQ(r.trades[0].insider_name, "Doe, Jane");
    ASSERT_EQ(r.errors.size(), 4u);
    EXPECT_EQ(r.errors[0].reason, "invalid side");
    EXPECT_EQ(r.errors[1].reason, "non-positive shares");
    EXPECT_EQ(r.errors[2].reason, "invalid shares");
    EXPECT_EQ(r.errors[3].reason, "wrong field count");
    EXPECT_EQ(r.errors[3].line, 5u);
}

TEST(ParseTrades, StrictModeThrows) {
    try {
        trades_from("I001,A,ACME,2014-02-30,P,1,1\n", IngestConfig{true});
        FAIL() << "expected StrictModeViolation";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::StrictModeViolation);
    }
}

TEST(ParseTrades, BadHeaderIsUnreadable) {
    std::istringstream in("id,date\nI001,2014-01-01\n");
    try {
        parse_trades(in);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnreadableStream);
    }
}

TEST(ParseQuotes, WellFormedRow) {
    auto r = quotes_from("ACME,2014-03-05,10.00,1000000\n");
    ASSERT_TRUE(r.errors.empty());
    ASSERT_EQ(r.quotes.size(), 1u);
    EXPECT_EQ(r.quotes[0].company, "ACME");
    EXPECT_EQ(r.quotes[0].date.to_string(), "2014-03-05");
    EXPECT_EQ(r.quotes[0].close.to_string(), "10.00");
    EXPECT_EQ(r.quotes[0].volume, 1000000);
}

TEST(ParseQuotes, DuplicateKeepsFirst) {
    auto r = quotes_from("ACME,2014-03-05,10.00,1000\nACME,2014-03-05,11.00,2000\n");
    ASSERT_EQ(r.quotes.size(), 1u);
    EXPECT_EQ(r.quotes[0].close.to_string(), "10.00");
    ASSERT_EQ(r.errors.size(), 1u);
    EXPECT_EQ(r.errors[0].reason, "duplicate quote");
}

TEST(ParseQuotes, ZeroCloseRejected) {
    auto r = quotes_from("ACME,2014-03-05,0,1000\n");
    EXPECT_TRUE(r.quotes.empty());
    ASSERT_EQ(r.errors.size(), 1u);
    EXPECT_EQ(r.errors[0].reason, "non-positive close");
}

TEST(BuildSequences, FiveTradesKept) {
    std::vector<TradeRecord> trades;
    for (int i = 0; i < 5; ++i)
        trades.push_back(trade("I1", "ACME", day(i), Side::Sale));
    auto seqs = build_date_sequences(trades, 5);
    ASSERT_EQ(seqs.size(), 1u);
    EXPECT_EQ(seqs[0].dates.size(), 5u);
}

TEST(BuildSequences, FourTradesDropped) {
    std::vector<TradeRecord> trades;
    for (int i = 0; i < 4; ++i)
        trades.push_back(trade("I1", "ACME", day(i), Side::Sale));
    EXPECT_TRUE(build_date_sequences(trades, 5).empty());
}

TEST(BuildSequences, RepeatsCountTowardThresholdThenDedup) {
    std::vector<TradeRecord> trades;
    for (int i : {0, 0, 1, 1, 2, 2})
        trades.push_back(trade("I1", "ACME", day(i), Side::Sale));
    auto seqs = build_date_sequences(trades, 5);
    ASSERT_EQ(seqs.size(), 1u);
    EXPECT_EQ(seqs[0].dates, testutil::days({0, 1, 2}));
    EXPECT_EQ(seqs[0].trade_count, 6u);
}

TEST(BuildSequences, FilterIsPerCompanyAndSide) {
    std::vector<TradeRecord> trades;
    for (int i = 0; i < 3; ++i) {
        trades.push_back(trade("I1", "ACME", day(i), Side::Sale));
        trades.push_back(trade("I1", "BETA", day(i), Side::Sale));
        trades.push_back(trade("I1", "ACME", day(10 + i), Side::Purchase));
    }
    EXPECT_TRUE(build_date_sequences(trades, 5).empty());
    EXPECT_EQ(build_date_sequences(trades, 3).size(), 3u);
}

TEST(BuildSequences, RejectsZeroThreshold) {
    EXPECT_THROW(build_date_sequences({}, 0), Error);
    EXPECT_TRUE(build_date_sequences({}, 1).empty());
}

TEST(BuildSequences, RandomInputsKeepInvariants) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> ins(0, 19), co(0, 3), d(0, 40), sd(0, 1);
    for (int round = 0; round < 50; ++round) {
        std::vector<TradeRecord> trades;
        for (int i = 0; i < 300; ++i)
            trades.push_back(trade("I" + std::to_string(ins(rng)), "C" + std::to_string(co(rng)), day(d(rng)),
                                   sd(rng) ? Side::Sale : Side::Purchase));
        const std::size_t min_trades = 1 + static_cast<std::size_t>(round % 6);
        auto seqs = build_date_sequences(trades, min_trades);

        std::map<std::tuple<std::string, std::string, Side>, std::size_t> counts;
        for (const auto& t : trades)
            ++counts[{t.insider_id, t.company, t.side}];
        std::size_t surviving = 0;
        for (const auto& [key, n] : counts)
            if (n >= min_trades)
                surviving += n;

        std::size_t total = 0;
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            const auto& s = seqs[i];
            EXPECT_TRUE(std::is_sorted(s.dates.begin(), s.dates.end()));
            EXPECT_EQ(std::adjacent_find(s.dates.begin(), s.dates.end()), s.dates.end());
            EXPECT_GE(s.trade_count, min_trades);
            EXPECT_EQ(s.trade_count, (counts[{s.insider_id, s.company, s.side}]));
            if (i > 0) {
                EXPECT_LT(seqs[i - 1].key(), s.key());
            }
            total += s.trade_count;
        }
        EXPECT_EQ(total, surviving);
    }
}

TEST(RoundTrip, TradesAndQuotesByteIdentical) {
    const std::string trades = kHeader + "I001,\"Doe, Jane\",ACME,2014-03-05,P,100,9.50\n"
                                         "I002,Bob,ACME,2014-03-06,S,7,\n"
                                         "I003,\"Say \"\"hi\"\"\",BETA,2015-12-31,S,1,0.125\n";
    std::istringstream in(trades);
    auto r = parse_trades(in);
    ASSERT_TRUE(r.errors.empty());
    EXPECT_EQ(serialize_trades(r.trades), trades);

    const std::string quotes = "company,date,close,volume\nACME,2014-03-05,10.00,1000\nACME,2014-03-06,9.5,20\n";
    std::istringstream qin(quotes);
    auto q = parse_quotes(qin);
    ASSERT_TRUE(q.errors.empty());
    EXPECT_EQ(serialize_quotes(q.quotes), quotes);
}

TEST(RoundTrip, SynthOutputReparses) {
    SynthConfig c;
    c.n_companies = 10;
    c.n_planted_cliques = 4;
    c.n_planted_hubs = 1;
    c.cliques_per_hub = 2;
    c.planted_side = PlantedSide::Sale;
    auto ds = generate(c);
    std::istringstream in(ds.trades_csv());
    auto r = parse_trades(in);
    EXPECT_TRUE(r.errors.empty());
    EXPECT_EQ(serialize_trades(r.trades), ds.trades_csv());
    std::istringstream qin(ds.quotes_csv());
    auto q = parse_quotes(qin);
    EXPECT_TRUE(q.errors.empty());
    EXPECT_EQ(serialize_quotes(q.quotes), ds.quotes_csv());
}

TEST(Dates, ParseIsStrict) {
    EXPECT_FALSE(Date::parse("2014-02-29"));
    EXPECT_TRUE(Date::parse("2016-02-29"));
    EXPECT_FALSE(Date::parse("2014-3-05"));
    EXPECT_FALSE(Date::parse("2014-03-05 "));
    EXPECT_EQ(Date::parse("2014-03-05")->to_string(), "2014-03-05");
    EXPECT_EQ((*Date::parse("2014-12-31") + 1).to_string(), "2015-01-01");
}
