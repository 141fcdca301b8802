// Acceptance suite: one PASS/FAIL line per criterion, tolerances and time
// limits fixed below. Exit status is non-zero if any criterion fails.

#include "test_util.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

using namespace insidernet;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = INSIDERNET_FIXTURES;

struct Outcome {
    bool ok = true;
    std::string detail;
};

void require(Outcome& o, bool cond, const std::string& what) {
    if (!cond && o.ok) {
        o.ok = false;
        o.detail = what;
    }
}

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs >= limit_s) {
        o.ok = false;
        o.detail = "took " + std::to_string(secs) + " s";
    }
    failures += !o.ok;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s / %.0f s", secs, limit_s);
    std::cout << (o.ok ? "[PASS] " : "[FAIL] ") << "AC" << id << " " << name << " (" << timing << ")";
    if (!o.detail.empty())
        std::cout << " - " << o.detail;
    std::cout << std::endl;
}

std::set<std::set<std::string>> plain_sets(const Hypergraph& h) {
    std::set<std::set<std::string>> out;
    for (const auto& e : h.hyperedges)
        out.insert({e.members.begin(), e.members.end()});
    return out;
}

Outcome triple_scenarios() {
    Outcome o;
    const SimilarityConfig cfg; // t = 5 for sales
    const NetworkStats triangle{3, 3, 1, {{3, 1}}};

    auto shared = testutil::shared_triple();
    auto h = mine_hyperedges(shared, Side::Sale, cfg);
    require(o, plain_sets(h) == std::set<std::set<std::string>>{{"t1", "t2", "t3"}}, "shared: hyperedges");
    require(o, h.hyperedges.size() == 1 && h.hyperedges[0].length() == 5, "shared: witness length");
    require(o, network_stats(build_network(shared, Side::Sale, cfg)) == triangle, "shared: clique");

    auto pairwise = testutil::pairwise_triple();
    h = mine_hyperedges(pairwise, Side::Sale, cfg);
    require(o, plain_sets(h) == std::set<std::set<std::string>>{{"t1", "t2"}, {"t1", "t3"}, {"t2", "t3"}},
            "pairwise: hyperedges");
    require(o, network_stats(build_network(pairwise, Side::Sale, cfg)) == triangle, "pairwise: clique");
    return o;
}

Outcome similarity_oracle() {
    Outcome o;
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 1000 && o.ok; ++i) {
        auto x = testutil::random_dates(rng, 120, 40), y = testutil::random_dates(rng, 120, 40);
        std::vector<Date> both;
        std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(both));
        const double inter = static_cast<double>(both.size());
        const double expected = inter * inter / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
        require(o, similarity_s(x, y) == expected, "S differs from |X∩Y|²/(|X||Y|) at pair " + std::to_string(i));
        require(o, lcs_subsequence_length(x, y) == both.size(), "LCS differs from |X∩Y| at pair " + std::to_string(i));
    }
    return o;
}

Outcome power_law_recovery() {
    Outcome o;
    constexpr double tol = 1e-9;
    for (double alpha : {1.0, 1.3, 1.8})
        for (double c : {0.5, 2.0, 4.0}) {
            std::vector<EgoPoint> pts;
            for (int v = 2; v < 52; ++v)
                pts.push_back({static_cast<double>(v), c * std::pow(static_cast<double>(v), alpha)});
            const auto fit = fit_power_law(pts);
            std::ostringstream tag;
            tag << "alpha=" << alpha << " c=" << c;
            require(o, std::abs(fit.exponent - alpha) <= tol, tag.str() + ": exponent");
            require(o, std::abs(fit.coefficient() - c) <= tol, tag.str() + ": coefficient");
            for (const auto& p : pts)
                require(o, outlier_score(p.e, fit(p.v)) <= tol, tag.str() + ": non-zero score");
        }
    return o;
}

Outcome score_point_check() {
    Outcome o;
    require(o, std::abs(outlier_score(8.0, 4.0) - 2.0 * std::log(5.0)) <= 1e-12, "Score(8, 4) != 2 ln 5");
    require(o, outlier_score(4.0, 8.0) == outlier_score(8.0, 4.0), "Score not symmetric");
    return o;
}

Outcome lof_sanity() {
    Outcome o;
    auto pts = testutil::grid(10);
    const auto l = lof(pts, 5);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const bool interior = pts[i].x > 0 && pts[i].x < 9 && pts[i].y > 0 && pts[i].y < 9;
        if (interior)
            require(o, l[i] >= 0.8 && l[i] <= 1.2, "interior LOF " + std::to_string(l[i]));
    }
    pts.push_back({9.0 + 10.0, 4.5}); // 10 grid spacings beyond the edge
    const auto lf = lof(pts, 5);
    require(o, lf.back() > 2.0, "far point LOF " + std::to_string(lf.back()));
    require(o, std::max_element(lf.begin(), lf.end()) - lf.begin() == static_cast<std::ptrdiff_t>(lf.size() - 1),
            "far point does not rank first");
    if (o.ok)
        o.detail = "far point LOF " + std::to_string(lf.back());
    return o;
}

Outcome planted_recovery() {
    Outcome o;
    std::ostringstream per_seed;
    int passing = 0, total_found = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto start = std::chrono::steady_clock::now();
        SynthConfig c;
        c.seed = seed;
        c.n_companies = 80;
        c.n_planted_cliques = 50;
        c.clique_size = {4, 8};
        c.n_planted_hubs = 5;
        c.cliques_per_hub = 3;
        c.planted_side = PlantedSide::Sale;
        const auto ds = generate(c);
        const auto net = build_network(build_date_sequences(ds.trades, 5), Side::Sale, SimilarityConfig{});
        const auto egos = egonet_stats(net);
        const auto report = total_outlier_scores(egos, fit_power_law(std::span<const EgoStats>(egos)));
        std::set<std::string> hubs;
        for (const auto& h : ds.truth.hubs)
            hubs.insert(h.id);
        int found = 0;
        for (std::size_t i = 0; i < 10 && i < report.size(); ++i)
            found += hubs.count(report[i].insider_id) > 0;
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        require(o, secs < 30.0, "seed " + std::to_string(seed) + " over 30 s");
        passing += found >= 4;
        total_found += found;
        per_seed << (seed > 1 ? " " : "") << seed << ":" << found;
    }
    require(o, passing == 10, "hubs in top 10 per seed (need >= 4 each)");
    o.detail = (o.ok ? "" : o.detail + "; ") + "seeds passing " + std::to_string(passing) + "/10, hubs found " +
               std::to_string(total_found) + "/50 [" + per_seed.str() + "]";
    return o;
}

Outcome hyperedge_oracle() {
    Outcome o;
    std::mt19937_64 rng(77);
    for (int i = 0; i < 100 && o.ok; ++i) {
        auto seqs = testutil::random_hyper_instance(rng, 12, 20);
        const std::size_t t = 2 + static_cast<std::size_t>(i % 4);
        SimilarityConfig cfg;
        cfg.lcs_threshold_sale = t;
        require(o, testutil::member_sets(mine_hyperedges(seqs, Side::Sale, cfg)) ==
                       testutil::exhaustive_hyperedges(seqs, Side::Sale, t),
                "instance " + std::to_string(i));
    }
    return o;
}

Outcome profit_signs() {
    Outcome o;
    const DailyQuote q{"ACME", testutil::day(0), *Decimal::parse("10.00"), 1000};
    auto amount = [&](Side side, const char* price) {
        TradeRecord t{"I", "N", "ACME", testutil::day(0), side, 100, Decimal::parse(price)};
        return signed_normalized_amount(t, q);
    };
    require(o, amount(Side::Purchase, "9.00") > 0, "purchase below close");
    require(o, amount(Side::Purchase, "11.00") < 0, "purchase above close");
    require(o, amount(Side::Sale, "11.00") > 0, "sale above close");
    require(o, amount(Side::Sale, "9.00") < 0, "sale below close");
    require(o, amount(Side::Purchase, "10.00") == 0.0 && amount(Side::Sale, "10.00") == 0.0, "price = close");

    SynthConfig c;
    c.n_companies = 5;
    c.insiders_per_company = {0, 0};
    c.n_planted_cliques = 5;
    c.clique_size = {4, 4};
    c.shared_subsequence_length = 10;
    c.clique_extra_trades = {0, 0};
    c.n_planted_hubs = 0;
    c.profit_bias = 0.9;
    c.missing_price_rate = 0.0;
    const auto ds = generate(c);
    const QuoteBook book(ds.quotes);
    std::vector<ProfitPoint> pts;
    for (const auto& k : ds.truth.cliques)
        for (const auto& m : k.members) {
            auto s = profit_series(m, k.company, k.side, k.dates, ds.trades, book);
            pts.insert(pts.end(), s.points.begin(), s.points.end());
        }
    require(o, pts.size() == 200, "planted group has " + std::to_string(pts.size()) + " trades");
    const double frac = majority_profit_fraction(pts);
    require(o, frac > 0.8, "majority fraction " + std::to_string(frac));
    if (o.ok)
        o.detail = "planted fraction " + std::to_string(frac);
    return o;
}

std::map<std::string, std::string> run_to(const fs::path& out, std::size_t threads) {
    fs::remove_all(out);
    PipelineConfig c;
    c.trades_path = kFixtures + "/trades.csv";
    c.quotes_path = kFixtures + "/quotes.csv";
    c.output_dir = out.string();
    c.threads = threads;
    const auto outcome = run_pipeline(c);
    if (outcome.exit_code != 0)
        throw std::runtime_error(outcome.error_json);
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(out))
        files[entry.path().filename().string()] = read_file(entry.path().string());
    return files;
}

Outcome determinism() {
    Outcome o;
    const auto base = fs::temp_directory_path() / "insidernet_acceptance";
    const auto a = run_to(base / "run1", 1);
    const auto b = run_to(base / "run2", 1);
    const auto c = run_to(base / "run3", 4);
    require(o, a.size() >= 20, "only " + std::to_string(a.size()) + " artifacts");
    require(o, a == b, "two single-thread runs differ");
    require(o, a == c, "1-thread and 4-thread runs differ");
    if (o.ok)
        o.detail = std::to_string(a.size()) + " artifacts identical";
    fs::remove_all(base);
    return o;
}

Outcome scale_smoke() {
    Outcome o;
    SynthConfig c;
    c.seed = 10;
    c.n_companies = 1000;
    c.insiders_per_company = {8, 12};
    c.trades_per_insider = {8, 12};
    c.n_planted_cliques = 60;
    c.n_planted_hubs = 6;
    const auto ds = generate(c);
    std::set<std::string> insiders;
    for (const auto& t : ds.trades)
        insiders.insert(t.insider_id);
    require(o, insiders.size() >= 10000, "only " + std::to_string(insiders.size()) + " insiders");
    require(o, ds.trades.size() >= 100000, "only " + std::to_string(ds.trades.size()) + " trades");

    const auto dir = fs::temp_directory_path() / "insidernet_scale";
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_file((dir / "trades.csv").string(), ds.trades_csv());
    write_file((dir / "quotes.csv").string(), ds.quotes_csv());
    PipelineConfig pc;
    pc.trades_path = (dir / "trades.csv").string();
    pc.quotes_path = (dir / "quotes.csv").string();
    pc.output_dir = (dir / "out").string();
    const auto outcome = run_pipeline(pc);
    require(o, outcome.exit_code == 0, outcome.error_json);
    o.detail = std::to_string(insiders.size()) + " insiders, " + std::to_string(ds.trades.size()) + " trades";
    fs::remove_all(dir);
    return o;
}

} // namespace

int main() {
    criterion(1, "shared vs pairwise triple: hyperedges and clique", 1, triple_scenarios);
    criterion(2, "similarity oracle on 1000 random pairs", 5, similarity_oracle);
    criterion(3, "power-law recovery within 1e-9", 1, power_law_recovery);
    criterion(4, "score point check 2 ln 5 within 1e-12", 1, score_point_check);
    criterion(5, "LOF grid interior in [0.8, 1.2], far point > 2 and first", 1, lof_sanity);
    criterion(6, "planted hubs: >= 4 of 5 in top 10 on seeds 1..10", 300, planted_recovery);
    criterion(7, "hyperedges equal exhaustive enumeration on 100 instances", 10, hyperedge_oracle);
    criterion(8, "profit signs and planted profitable group", 5, profit_signs);
    criterion(9, "byte-identical artifacts across runs and threads {1, 4}", 60, determinism);
    criterion(10, "10k insiders / 100k trades end to end", 60, scale_smoke);
    std::cout << (10 - failures) << "/10 criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
