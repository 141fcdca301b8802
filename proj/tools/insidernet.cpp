// insidernet command-line driver.
//
// Pipeline options come from, in increasing precedence: built-in defaults,
// the config file named by --config (or $INSIDERNET_CONFIG), and flags.

#include <insidernet/insidernet.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

using namespace insidernet;
namespace fs = std::filesystem;

// Flag name -> config key, for every option shared with the config file.
const std::vector<std::pair<std::string, std::string>> kPipelineFlags = {
    {"--trades", "trades"},
    {"--quotes", "quotes"},
    {"--out", "out"},
    {"--side", "side"},
    {"--mode", "mode"},
    {"--lcs-variant", "lcs_variant"},
    {"--t-sale", "t_sale"},
    {"--t-purchase", "t_purchase"},
    {"--overlap-threshold", "overlap_threshold"},
    {"--min-trades", "min_trades"},
    {"--k", "k"},
    {"--bin-base", "bin_base"},
    {"--normalize", "normalize"},
    {"--top-n", "top_n"},
    {"--profit", "profit"},
    {"--min-hyperedges", "min_hyperedges"},
    {"--threads", "threads"},
    {"--strict", "strict"},
};

struct PipelineFlags {
    std::map<std::string, std::string> values;
    std::string config_path;
    std::string t_both;
};

void add_pipeline_flags(CLI::App* app, PipelineFlags& flags) {
    for (const auto& [flag, key] : kPipelineFlags)
        app->add_option(flag, flags.values[key], "config key `" + key + "`");
    app->add_option("--t", flags.t_both, "LCS threshold applied to every selected side");
    app->add_option("--config", flags.config_path, "key = value config file (default: $INSIDERNET_CONFIG)");
}

PipelineConfig resolve(CLI::App* app, const PipelineFlags& flags) {
    PipelineConfig c;
    std::string path = flags.config_path;
    if (path.empty())
        if (const char* env = std::getenv("INSIDERNET_CONFIG"))
            path = env;
    if (!path.empty())
        apply_config_text(c, read_file(path));
    for (const auto& [flag, key] : kPipelineFlags)
        if (app->count(flag) > 0)
            set_pipeline_option(c, key, flags.values.at(key));
    if (app->count("--t") > 0) {
        for (Side s : c.sides)
            set_pipeline_option(c, s == Side::Sale ? "t_sale" : "t_purchase", flags.t_both);
    }
    return c;
}

int fail(const Error& e, const std::string& path = {}) {
    std::cerr << error_json(e, path) << "\n";
    return exit_code_for(e.code());
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::IoFailure, "cannot create output directory " + dir);
}

std::string out_path(const PipelineConfig& c, Side side, const std::string& name) {
    return (fs::path(c.output_dir) / (std::string(to_string(side)) + "_" + name)).string();
}

int cmd_ingest_check(const PipelineConfig& c) {
    const auto in = load_inputs(c, !c.quotes_path.empty());
    std::cout << ingest_report_json(in).dump(2) << "\n";
    return 0;
}

int cmd_build_net(const PipelineConfig& c, const std::string& ego) {
    const auto in = load_inputs(c, false);
    ensure_dir(c.output_dir);
    for (Side side : c.sides) {
        const auto net = build_network(in.sequences, side, c.similarity, c.threads);
        const auto stats = network_stats(net);
        write_file(out_path(c, side, "network.json"), network_to_json(net).dump(2) + "\n");
        write_file(out_path(c, side, "stats.json"), stats_to_json(stats).dump(2) + "\n");
        write_file(out_path(c, side, "component_sizes.csv"), component_sizes_csv(stats));
        if (!net.empty())
            export_dot(net, out_path(c, side, "network.dot"));
        if (!ego.empty() && net.find(ego))
            export_dot(egonet(net, ego), out_path(c, side, "egonet_" + ego + ".dot"), c.similarity.mode);
        std::cout << to_string(side) << ": " << stats.nodes << " nodes, " << stats.edges << " edges, "
                  << stats.components << " components\n";
    }
    return 0;
}

int cmd_mine_hyper(const PipelineConfig& c) {
    const auto in = load_inputs(c, false);
    ensure_dir(c.output_dir);
    for (Side side : c.sides) {
        const auto h = mine_hyperedges(in.sequences, side, c.similarity, c.threads);
        write_file(out_path(c, side, "hyperedges.json"), hypergraph_to_json(h).dump(2) + "\n");
        write_file(out_path(c, side, "hyperedge_sizes.csv"), hyperedge_sizes_csv(hyperedge_size_distribution(h)));
        if (!h.hyperedges.empty())
            export_dot(h, out_path(c, side, "hypergraph.dot"));
        json multi = json::array();
        for (const auto& m : multi_edge_insiders(h, c.min_hyperedges))
            multi.push_back({{"insider_id", m.insider_id}, {"hyperedges", m.hyperedges}});
        write_file(out_path(c, side, "multi_edge_insiders.json"), multi.dump(2) + "\n");
        std::cout << to_string(side) << ": " << h.hyperedges.size() << " hyperedges over " << h.vertices.size()
                  << " insiders, " << multi.size() << " in >= " << c.min_hyperedges << " hyperedges\n";
    }
    return 0;
}

int cmd_score(const PipelineConfig& c) {
    const auto in = load_inputs(c, false);
    ensure_dir(c.output_dir);
    for (Side side : c.sides) {
        const auto net = build_network(in.sequences, side, c.similarity, c.threads);
        const auto egos = egonet_stats(net);
        const auto fit = fit_power_law(std::span<const EgoStats>(egos), c.anomaly.fit);
        const auto report = total_outlier_scores(egos, fit, c.anomaly);
        const std::span<const OutlierRecord> top(report.data(), std::min(c.top_n, report.size()));
        write_file(out_path(c, side, "fit.json"), fit_to_json(fit).dump(2) + "\n");
        write_file(out_path(c, side, "scores.csv"), scores_csv(report));
        write_file(out_path(c, side, "top_scores.csv"), scores_csv(top));
        std::cout << to_string(side) << ": exponent " << fit.exponent << ", top outlier "
                  << (top.empty() ? "-" : top.front().insider_id) << "\n";
    }
    return 0;
}

// The profit stage needs the network and hypergraph, so it runs the full
// per-side pipeline with profit evaluation enabled.
int run_full(PipelineConfig c, bool force_profit) {
    if (force_profit)
        c.profit = true;
    const auto outcome = run_pipeline(c);
    if (outcome.exit_code != 0) {
        std::cerr << outcome.error_json << "\n";
        return outcome.exit_code;
    }
    for (const auto& s : outcome.sides)
        std::cout << to_string(s.side) << ": " << s.stats.nodes << " nodes, " << s.stats.edges << " edges, "
                  << s.hyperedges << " hyperedges, top outlier "
                  << (s.top.empty() ? "-" : s.top.front().insider_id) << "\n";
    std::cout << outcome.files.size() << " files written to " << c.output_dir << "\n";
    return 0;
}

struct SynthFlags {
    SynthConfig config;
    std::string out = "synth";
    std::string planted_side = "alternate";
    std::string layout = "shared";
    std::string start, end;
};

int cmd_synth(SynthFlags f) {
    auto& c = f.config;
    if (f.planted_side == "sale")
        c.planted_side = PlantedSide::Sale;
    else if (f.planted_side == "purchase")
        c.planted_side = PlantedSide::Purchase;
    else if (f.planted_side == "alternate")
        c.planted_side = PlantedSide::Alternate;
    else
        throw Error(ErrorCode::InvalidConfig, "planted side must be sale, purchase or alternate");
    if (f.layout == "pairwise")
        c.clique_layout = CliqueLayout::PairwiseSequences;
    else if (f.layout != "shared")
        throw Error(ErrorCode::InvalidConfig, "layout must be shared or pairwise");
    for (auto [text, target] : {std::pair{&f.start, &c.date_start}, std::pair{&f.end, &c.date_end}}) {
        if (text->empty())
            continue;
        auto d = Date::parse(*text);
        if (!d)
            throw Error(ErrorCode::InvalidConfig, "bad date " + *text);
        *target = *d;
    }
    const auto ds = generate(c);
    ensure_dir(f.out);
    write_file((fs::path(f.out) / "trades.csv").string(), ds.trades_csv());
    write_file((fs::path(f.out) / "quotes.csv").string(), ds.quotes_csv());
    write_file((fs::path(f.out) / "truth.json").string(), ds.truth_json());
    std::cout << ds.trades.size() << " trades, " << ds.quotes.size() << " quotes, " << ds.truth.cliques.size()
              << " cliques, " << ds.truth.hubs.size() << " hubs -> " << f.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Insider co-trading network mining"};
    app.require_subcommand(1);

    PipelineFlags flags;
    std::string ego;
    auto* ingest = app.add_subcommand("ingest-check", "Parse and validate trade/quote files");
    auto* build = app.add_subcommand("build-net", "Build insider networks and component statistics");
    auto* hyper = app.add_subcommand("mine-hyper", "Mine co-trading hyperedges");
    auto* score = app.add_subcommand("score", "Rank egonets by total outlier score");
    auto* profit = app.add_subcommand("profit", "Profit series for flagged insiders");
    auto* pipeline = app.add_subcommand("pipeline", "Run every stage and write all artifacts");
    for (auto* sub : {ingest, build, hyper, score, profit, pipeline})
        add_pipeline_flags(sub, flags);
    build->add_option("--egonet", ego, "also export the egonet of this insider as DOT");

    SynthFlags synth_flags;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with planted structure");
    {
        auto& c = synth_flags.config;
        synth->add_option("--seed", c.seed);
        synth->add_option("--companies", c.n_companies);
        synth->add_option("--insiders-min", c.insiders_per_company.lo);
        synth->add_option("--insiders-max", c.insiders_per_company.hi);
        synth->add_option("--trades-min", c.trades_per_insider.lo);
        synth->add_option("--trades-max", c.trades_per_insider.hi);
        synth->add_option("--start", synth_flags.start, "first calendar date (YYYY-MM-DD)");
        synth->add_option("--end", synth_flags.end, "last calendar date (YYYY-MM-DD)");
        synth->add_option("--cliques", c.n_planted_cliques);
        synth->add_option("--clique-min", c.clique_size.lo);
        synth->add_option("--clique-max", c.clique_size.hi);
        synth->add_option("--shared-length", c.shared_subsequence_length);
        synth->add_option("--extra-min", c.clique_extra_trades.lo);
        synth->add_option("--extra-max", c.clique_extra_trades.hi);
        synth->add_option("--layout", synth_flags.layout, "shared | pairwise");
        synth->add_option("--hubs", c.n_planted_hubs);
        synth->add_option("--cliques-per-hub", c.cliques_per_hub);
        synth->add_option("--planted-side", synth_flags.planted_side, "sale | purchase | alternate");
        synth->add_option("--profit-bias", c.profit_bias);
        synth->add_option("--missing-price-rate", c.missing_price_rate);
        synth->add_option("--out", synth_flags.out, "output directory");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed())
            return cmd_synth(synth_flags);
        for (auto* sub : {ingest, build, hyper, score, profit, pipeline}) {
            if (!sub->parsed())
                continue;
            PipelineConfig c = resolve(sub, flags);
            c.validate();
            if (c.trades_path.empty())
                throw Error(ErrorCode::InvalidConfig, "--trades is required");
            if (sub == ingest)
                return cmd_ingest_check(c);
            if (sub == build)
                return cmd_build_net(c, ego);
            if (sub == hyper)
                return cmd_mine_hyper(c);
            if (sub == score)
                return cmd_score(c);
            return run_full(c, sub == profit);
        }
    } catch (const Error& e) {
        return fail(e);
    } catch (const std::exception& e) {
        return fail(Error(ErrorCode::IoFailure, e.what()));
    }
    return 0;
}
