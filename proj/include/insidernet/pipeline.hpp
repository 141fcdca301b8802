#pragma once

// End-to-end run: files -> date sequences -> network + hypergraph per side ->
// egonet outlier ranking -> profit series for flagged insiders.

#include "anomaly.hpp"
#include "export.hpp"
#include "hypergraph.hpp"
#include "ingest.hpp"
#include "network.hpp"
#include "parallel.hpp"
#include "profit.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace insidernet {

struct PipelineConfig {
    std::string trades_path;
    std::string quotes_path;
    std::string output_dir = "out";
    SimilarityConfig similarity;
    std::size_t min_trades = 5;
    AnomalyOptions anomaly;
    std::size_t top_n = 10;
    bool profit = true;
    std::size_t min_hyperedges = 4;
    std::vector<Side> sides{Side::Sale, Side::Purchase};
    std::size_t threads = 1;
    bool strict = false;

    void validate() const {
        similarity.validate();
        if (min_trades < 1)
            throw Error(ErrorCode::InvalidConfig, "min_trades must be at least 1");
        if (min_hyperedges < 2)
            throw Error(ErrorCode::InvalidConfig, "min_hyperedges must be at least 2");
        if (top_n < 1)
            throw Error(ErrorCode::InvalidConfig, "top_n must be at least 1");
        if (sides.empty())
            throw Error(ErrorCode::InvalidConfig, "no side selected");
        if (threads < 1)
            throw Error(ErrorCode::InvalidConfig, "threads must be at least 1");
    }
};

namespace detail {

inline bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw Error(ErrorCode::InvalidConfig, "expected a boolean, got `" + v + "`");
}

inline std::size_t parse_count(const std::string& v) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw Error(ErrorCode::InvalidConfig, "expected a non-negative integer, got `" + v + "`");
    return out;
}

inline double parse_real(const std::string& v) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used == v.size())
            return d;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidConfig, "expected a number, got `" + v + "`");
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace detail

inline std::vector<Side> parse_sides(const std::string& v) {
    if (v == "both")
        return {Side::Sale, Side::Purchase};
    if (auto s = parse_side(v))
        return {*s};
    throw Error(ErrorCode::InvalidConfig, "side must be sale, purchase or both");
}

/// Sets one option by its config-file key. Keys match the long CLI flags
/// with '-' written as '_'.
inline void set_pipeline_option(PipelineConfig& c, const std::string& key, const std::string& value) {
    using namespace detail;
    if (key == "trades")
        c.trades_path = value;
    else if (key == "quotes")
        c.quotes_path = value;
    else if (key == "out")
        c.output_dir = value;
    else if (key == "side")
        c.sides = parse_sides(value);
    else if (key == "mode") {
        if (value == "lcs")
            c.similarity.mode = SimilarityMode::Lcs;
        else if (value == "overlap")
            c.similarity.mode = SimilarityMode::Overlap;
        else
            throw Error(ErrorCode::InvalidConfig, "mode must be lcs or overlap");
    } else if (key == "lcs_variant") {
        if (value == "subsequence")
            c.similarity.lcs_variant = LcsVariant::Subsequence;
        else if (value == "contiguous")
            c.similarity.lcs_variant = LcsVariant::ContiguousRun;
        else
            throw Error(ErrorCode::InvalidConfig, "lcs_variant must be subsequence or contiguous");
    } else if (key == "t_sale")
        c.similarity.lcs_threshold_sale = parse_count(value);
    else if (key == "t_purchase")
        c.similarity.lcs_threshold_purchase = parse_count(value);
    else if (key == "overlap_threshold")
        c.similarity.overlap_threshold = parse_real(value);
    else if (key == "min_trades")
        c.min_trades = parse_count(value);
    else if (key == "k")
        c.anomaly.k = parse_count(value);
    else if (key == "bin_base")
        c.anomaly.fit.bin_base = parse_real(value);
    else if (key == "normalize")
        c.anomaly.normalize = parse_bool(value);
    else if (key == "top_n")
        c.top_n = parse_count(value);
    else if (key == "profit")
        c.profit = parse_bool(value);
    else if (key == "min_hyperedges")
        c.min_hyperedges = parse_count(value);
    else if (key == "threads")
        c.threads = parse_count(value);
    else if (key == "strict")
        c.strict = parse_bool(value);
    else
        throw Error(ErrorCode::InvalidConfig, "unknown config key `" + key + "`");
}

/// `key = value` lines; blank lines and lines starting with '#' are ignored.
inline void apply_config_text(PipelineConfig& c, std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::InvalidConfig, "config line " + std::to_string(line_no) + ": expected key = value");
        set_pipeline_option(c, detail::trim(std::string_view(t).substr(0, eq)),
                            detail::trim(std::string_view(t).substr(eq + 1)));
    }
}

struct SideSummary {
    Side side = Side::Sale;
    NetworkStats stats;
    std::size_t hyperedges = 0;
    std::vector<OutlierRecord> top;
};

struct PipelineOutcome {
    int exit_code = 0;
    std::string error_json; ///< empty on success
    std::vector<std::string> files;
    std::vector<SideSummary> sides;
};

/// Input data shared by the stages of every side.
struct LoadedInputs {
    std::vector<TradeRecord> trades;
    std::vector<RowError> trade_errors;
    std::vector<DailyQuote> quotes;
    std::vector<RowError> quote_errors;
    std::vector<DateSequence> sequences;
};

inline LoadedInputs load_inputs(const PipelineConfig& c, bool need_quotes) {
    LoadedInputs in;
    {
        std::ifstream f(c.trades_path, std::ios::binary);
        if (!f)
            throw Error(ErrorCode::IoFailure, "cannot open trades file " + c.trades_path);
        auto r = parse_trades(f, IngestConfig{c.strict});
        in.trades = std::move(r.trades);
        in.trade_errors = std::move(r.errors);
    }
    if (need_quotes) {
        if (c.quotes_path.empty())
            throw Error(ErrorCode::IoFailure, "profit evaluation needs a quotes file");
        std::ifstream f(c.quotes_path, std::ios::binary);
        if (!f)
            throw Error(ErrorCode::IoFailure, "cannot open quotes file " + c.quotes_path);
        auto r = parse_quotes(f);
        in.quotes = std::move(r.quotes);
        in.quote_errors = std::move(r.errors);
        if (c.strict && !in.quote_errors.empty())
            throw Error(ErrorCode::StrictModeViolation,
                        std::to_string(in.quote_errors.size()) + " malformed quote row(s); first at line " +
                            std::to_string(in.quote_errors.front().line));
    }
    in.sequences = build_date_sequences(in.trades, c.min_trades);
    return in;
}

inline json ingest_report_json(const LoadedInputs& in) {
    auto errors = [](const std::vector<RowError>& v) {
        json a = json::array();
        for (const auto& e : v)
            a.push_back({{"line", e.line}, {"reason", e.reason}});
        return a;
    };
    std::size_t insiders = 0;
    {
        std::set<std::string> ids;
        for (const auto& t : in.trades)
            ids.insert(t.insider_id);
        insiders = ids.size();
    }
    return {{"trades", in.trades.size()},
            {"trade_errors", errors(in.trade_errors)},
            {"quotes", in.quotes.size()},
            {"quote_errors", errors(in.quote_errors)},
            {"insiders", insiders},
            {"sequences", in.sequences.size()}};
}

namespace detail {

using SequenceIndex = std::map<std::tuple<std::string, std::string, Side>, const DateSequence*>;

inline SequenceIndex index_sequences(const std::vector<DateSequence>& seqs) {
    SequenceIndex idx;
    for (const auto& s : seqs)
        idx.emplace(std::tuple{s.insider_id, s.company, s.side}, &s);
    return idx;
}

/// Profit series over per-company date sets, concatenated in date order.
inline ProfitSeries series_over(const std::string& insider, Side side, const std::map<std::string, std::set<Date>>& dates,
                                const LoadedInputs& in, const QuoteBook& book) {
    ProfitSeries all;
    for (const auto& [company, ds] : dates) {
        const std::vector<Date> sorted(ds.begin(), ds.end());
        auto s = profit_series(insider, company, side, sorted, in.trades, book);
        all.considered += s.considered;
        all.skipped += s.skipped;
        all.points.insert(all.points.end(), s.points.begin(), s.points.end());
    }
    std::stable_sort(all.points.begin(), all.points.end(),
                     [](const ProfitPoint& a, const ProfitPoint& b) { return a.date < b.date; });
    return all;
}

inline json series_summary(const std::string& insider, const ProfitSeries& s) {
    json j = {{"insider_id", insider},
              {"points", s.points.size()},
              {"considered", s.considered},
              {"skipped", s.skipped}};
    j["positive_fraction"] = s.points.empty() ? json(nullptr) : json(majority_profit_fraction(s.points));
    return j;
}

} // namespace detail

/// Runs every stage for one side and writes its artifacts. Returns the file names written.
inline std::vector<std::string> run_side(const PipelineConfig& c, const LoadedInputs& in, const QuoteBook& book, Side side,
                                         SideSummary& summary) {
    namespace fs = std::filesystem;
    const std::string prefix = std::string(to_string(side)) + "_";
    std::vector<std::pair<std::string, std::string>> files;
    auto emit = [&](const std::string& name, std::string content) { files.emplace_back(prefix + name, std::move(content)); };

    const auto net = build_network(in.sequences, side, c.similarity, c.threads);
    if (net.empty())
        throw Error(ErrorCode::DegenerateInput, std::string(to_string(side)) + " network has no edges");
    const auto stats = network_stats(net);
    emit("network.json", network_to_json(net).dump(2) + "\n");
    emit("network.dot", network_dot(net));
    emit("stats.json", stats_to_json(stats).dump(2) + "\n");
    emit("component_sizes.csv", component_sizes_csv(stats));

    const auto hyper = mine_hyperedges(in.sequences, side, c.similarity, c.threads);
    emit("hyperedges.json", hypergraph_to_json(hyper).dump(2) + "\n");
    emit("hyperedge_sizes.csv", hyperedge_sizes_csv(hyperedge_size_distribution(hyper)));
    if (!hyper.hyperedges.empty())
        emit("hypergraph.dot", hypergraph_dot(hyper));

    const auto egos = egonet_stats(net);
    const auto fit = fit_power_law(std::span<const EgoStats>(egos), c.anomaly.fit);
    const auto report = total_outlier_scores(egos, fit, c.anomaly);
    const std::size_t top_n = std::min(c.top_n, report.size());
    const std::span<const OutlierRecord> top(report.data(), top_n);
    emit("fit.json", fit_to_json(fit).dump(2) + "\n");
    emit("scores.csv", scores_csv(report));
    emit("top_scores.csv", scores_csv(top));
    if (!top.empty())
        emit("top_egonet.dot", egonet_dot(egonet(net, top.front().insider_id), c.similarity.mode));

    if (c.profit) {
        const auto seq_index = detail::index_sequences(in.sequences);
        auto seq_of = [&](const std::string& id, const std::string& company) {
            return seq_index.at(std::tuple{id, company, side});
        };
        json summary_json = {{"outliers", json::array()}, {"hyper", json::array()}};

        std::vector<ProfitPoint> outlier_points;
        for (const auto& r : top) {
            std::map<std::string, std::set<Date>> dates;
            const NodeId u = net.index_of(r.insider_id);
            for (NodeId v : net.neighbors(u)) {
                const auto* e = net.edge(u, v);
                const auto w = lcs_witness(*seq_of(r.insider_id, e->company), *seq_of(net.nodes()[v], e->company),
                                           c.similarity.lcs_variant);
                dates[e->company].insert(w.begin(), w.end());
            }
            const auto s = detail::series_over(r.insider_id, side, dates, in, book);
            outlier_points.insert(outlier_points.end(), s.points.begin(), s.points.end());
            summary_json["outliers"].push_back(detail::series_summary(r.insider_id, s));
        }
        emit("profits_outliers.csv", profits_csv(outlier_points));

        std::vector<ProfitPoint> hyper_points;
        for (const auto& m : multi_edge_insiders(hyper, c.min_hyperedges)) {
            std::map<std::string, std::set<Date>> dates;
            for (std::size_t k : m.hyperedges) {
                const auto& he = hyper.hyperedges[k];
                dates[he.company].insert(he.witness.begin(), he.witness.end());
            }
            const auto s = detail::series_over(m.insider_id, side, dates, in, book);
            hyper_points.insert(hyper_points.end(), s.points.begin(), s.points.end());
            auto j = detail::series_summary(m.insider_id, s);
            j["hyperedges"] = m.hyperedges.size();
            summary_json["hyper"].push_back(std::move(j));
        }
        emit("profits_hyper.csv", profits_csv(hyper_points));
        emit("profit_summary.json", summary_json.dump(2) + "\n");
    }

    std::vector<std::string> names;
    for (const auto& [name, content] : files) {
        write_file((fs::path(c.output_dir) / name).string(), content);
        names.push_back(name);
    }
    summary.side = side;
    summary.stats = stats;
    summary.hyperedges = hyper.hyperedges.size();
    summary.top.assign(top.begin(), top.end());
    return names;
}

inline int exit_code_for(ErrorCode code) { return code == ErrorCode::DegenerateInput ? 2 : 1; }

inline std::string error_json(const Error& e, const std::string& path = {}) {
    json j = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}, {"exit_code", exit_code_for(e.code())}};
    if (!path.empty())
        j["path"] = path;
    return j.dump();
}

/// Exit status 0 on success, 1 for input/parse failures, 2 when a side is too
/// degenerate to analyse. Sides run concurrently when config.threads > 1.
inline PipelineOutcome run_pipeline(const PipelineConfig& c) {
    namespace fs = std::filesystem;
    PipelineOutcome outcome;
    LoadedInputs in;
    try {
        c.validate();
        in = load_inputs(c, c.profit);
        std::error_code ec;
        fs::create_directories(c.output_dir, ec);
        if (ec)
            throw Error(ErrorCode::IoFailure, "cannot create output directory " + c.output_dir);
        write_file((fs::path(c.output_dir) / "ingest_report.json").string(), ingest_report_json(in).dump(2) + "\n");
        outcome.files.push_back("ingest_report.json");
    } catch (const Error& e) {
        std::string path;
        const std::string msg = e.what();
        for (const auto* p : {&c.trades_path, &c.quotes_path, &c.output_dir})
            if (!p->empty() && p->size() > path.size() && msg.find(*p) != std::string::npos)
                path = *p;
        outcome.exit_code = exit_code_for(e.code());
        outcome.error_json = error_json(e, path);
        return outcome;
    }

    const QuoteBook book(in.quotes);
    std::vector<SideSummary> summaries(c.sides.size());
    std::vector<std::vector<std::string>> written(c.sides.size());
    std::vector<std::optional<Error>> failures(c.sides.size());
    parallel_for(c.sides.size(), c.threads, [&](std::size_t i) {
        try {
            written[i] = run_side(c, in, book, c.sides[i], summaries[i]);
        } catch (const Error& e) {
            failures[i] = e;
        }
    });
    for (std::size_t i = 0; i < c.sides.size(); ++i) {
        outcome.files.insert(outcome.files.end(), written[i].begin(), written[i].end());
        if (failures[i] && outcome.exit_code == 0) {
            outcome.exit_code = exit_code_for(failures[i]->code());
            outcome.error_json = error_json(*failures[i]);
        }
        if (!failures[i])
            outcome.sides.push_back(std::move(summaries[i]));
    }
    return outcome;
}

} // namespace insidernet
