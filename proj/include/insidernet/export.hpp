#pragma once

// Artifact writers and their readers: JSON for structures, CSV for tables,
// DOT for inspection. JSON objects are emitted with sorted keys.

#include "anomaly.hpp"
#include "csv.hpp"
#include "error.hpp"
#include "hypergraph.hpp"
#include "network.hpp"
#include "profit.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace insidernet {

using json = nlohmann::json;

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::IoFailure, "cannot open " + path + " for writing");
    out << content;
    if (!out)
        throw Error(ErrorCode::IoFailure, "write failed: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- network ----------------------------------------------------------------

inline json similarity_config_to_json(const SimilarityConfig& c) {
    return {{"name", std::string(to_string(c.mode))},
            {"overlap_threshold", c.overlap_threshold},
            {"t_sale", c.lcs_threshold_sale},
            {"t_purchase", c.lcs_threshold_purchase},
            {"variant", std::string(to_string(c.lcs_variant))}};
}

inline SimilarityConfig similarity_config_from_json(const json& j) {
    SimilarityConfig c;
    c.mode = j.at("name").get<std::string>() == "overlap" ? SimilarityMode::Overlap : SimilarityMode::Lcs;
    c.overlap_threshold = j.at("overlap_threshold").get<double>();
    c.lcs_threshold_sale = j.at("t_sale").get<std::size_t>();
    c.lcs_threshold_purchase = j.at("t_purchase").get<std::size_t>();
    c.lcs_variant = j.at("variant").get<std::string>() == "contiguous" ? LcsVariant::ContiguousRun
                                                                       : LcsVariant::Subsequence;
    return c;
}

inline json network_to_json(const InsiderNetwork& net) {
    json edges = json::array();
    for (const auto& e : net.edges())
        edges.push_back({{"a", net.nodes()[e.a]}, {"b", net.nodes()[e.b]}, {"weight", e.weight}, {"company", e.company}});
    return {{"side", std::string(to_string(net.side()))},
            {"mode", similarity_config_to_json(net.config())},
            {"nodes", net.nodes()},
            {"edges", edges}};
}

inline InsiderNetwork network_from_json(const json& j) {
    auto side = parse_side(j.at("side").get<std::string>());
    if (!side)
        throw Error(ErrorCode::UnreadableStream, "bad side in network JSON");
    std::vector<std::string> ids = j.at("nodes").get<std::vector<std::string>>();
    std::unordered_map<std::string, NodeId> index;
    for (NodeId i = 0; i < ids.size(); ++i)
        index.emplace(ids[i], i);
    std::vector<NetworkEdge> edges;
    for (const auto& e : j.at("edges")) {
        auto a = index.find(e.at("a").get<std::string>()), b = index.find(e.at("b").get<std::string>());
        if (a == index.end() || b == index.end())
            throw Error(ErrorCode::UnreadableStream, "edge references an unknown node");
        edges.push_back({a->second, b->second, e.at("weight").get<double>(), e.at("company").get<std::string>()});
    }
    return InsiderNetwork(*side, similarity_config_from_json(j.at("mode")), std::move(ids), std::move(edges));
}

inline json stats_to_json(const NetworkStats& s) {
    json hist = json::object();
    for (const auto& [size, count] : s.component_sizes)
        hist[std::to_string(size)] = count;
    return {{"nodes", s.nodes}, {"edges", s.edges}, {"components", s.components}, {"component_sizes", hist}};
}

inline std::string component_sizes_csv(const NetworkStats& s) {
    std::string out = "size,count\n";
    for (const auto& [size, count] : s.component_sizes)
        out += std::to_string(size) + "," + std::to_string(count) + "\n";
    return out;
}

// ---- hypergraph ---------------------------------------------------------------

inline json hypergraph_to_json(const Hypergraph& h) {
    json edges = json::array();
    for (const auto& e : h.hyperedges) {
        json witness = json::array();
        for (Date d : e.witness)
            witness.push_back(d.to_string());
        edges.push_back({{"company", e.company}, {"members", e.members}, {"witness", witness}, {"length", e.length()}});
    }
    return {{"side", std::string(to_string(h.side))}, {"hyperedges", edges}};
}

inline Hypergraph hypergraph_from_json(const json& j) {
    Hypergraph h;
    auto side = parse_side(j.at("side").get<std::string>());
    if (!side)
        throw Error(ErrorCode::UnreadableStream, "bad side in hypergraph JSON");
    h.side = *side;
    for (const auto& e : j.at("hyperedges")) {
        Hyperedge he;
        he.company = e.at("company").get<std::string>();
        he.side = h.side;
        he.members = e.at("members").get<std::vector<std::string>>();
        for (const auto& d : e.at("witness")) {
            auto date = Date::parse(d.get<std::string>());
            if (!date)
                throw Error(ErrorCode::UnreadableStream, "bad witness date");
            he.witness.push_back(*date);
        }
        if (e.at("length").get<std::size_t>() != he.witness.size())
            throw Error(ErrorCode::UnreadableStream, "hyperedge length disagrees with witness");
        h.vertices.insert(h.vertices.end(), he.members.begin(), he.members.end());
        h.hyperedges.push_back(std::move(he));
    }
    std::sort(h.vertices.begin(), h.vertices.end());
    h.vertices.erase(std::unique(h.vertices.begin(), h.vertices.end()), h.vertices.end());
    return h;
}

inline std::string hyperedge_sizes_csv(const std::map<std::size_t, SizeBucket>& dist) {
    std::string out = "size,count,percent\n";
    for (const auto& [size, b] : dist)
        out += std::to_string(size) + "," + std::to_string(b.count) + "," + fixed6(b.percent) + "\n";
    return out;
}

// ---- anomaly ------------------------------------------------------------------

inline json fit_to_json(const PowerLawFit& fit) {
    json points = json::array();
    for (const auto& p : fit.points)
        points.push_back({{"v", p.v}, {"median_e", p.median_e}});
    return {{"exponent", fit.exponent}, {"intercept", fit.intercept}, {"points", points}};
}

inline PowerLawFit fit_from_json(const json& j) {
    PowerLawFit fit;
    fit.exponent = j.at("exponent").get<double>();
    fit.intercept = j.at("intercept").get<double>();
    for (const auto& p : j.at("points"))
        fit.points.push_back({p.at("v").get<double>(), p.at("median_e").get<double>()});
    return fit;
}

inline constexpr std::string_view kScoresHeader = "insider_id,v,e,f_v,score,lof,total,rank";

inline std::string scores_csv(std::span<const OutlierRecord> records) {
    std::string out(kScoresHeader);
    out += '\n';
    for (const auto& r : records) {
        out += csv::quote(r.insider_id) + "," + std::to_string(r.v) + "," + std::to_string(r.e) + "," + fixed6(r.f_v) +
               "," + fixed6(r.score) + "," + fixed6(r.lof) + "," + fixed6(r.total) + "," + std::to_string(r.rank) + "\n";
    }
    return out;
}

/// Reads a scores CSV; numeric columns carry the 6-decimal rounding of the writer.
inline std::vector<OutlierRecord> parse_scores_csv(std::istream& in) {
    auto lines = csv::read_lines(in);
    if (lines.empty() || lines.front() != kScoresHeader)
        throw Error(ErrorCode::UnreadableStream, "scores CSV header mismatch");
    std::vector<OutlierRecord> out;
    std::vector<std::string> f;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty())
            continue;
        if (!csv::split_line(lines[i], f) || f.size() != 8)
            throw Error(ErrorCode::UnreadableStream, "malformed scores row at line " + std::to_string(i + 1));
        try {
            out.push_back({f[0], std::stoul(f[1]), std::stoul(f[2]), std::stod(f[3]), std::stod(f[4]), std::stod(f[5]),
                           std::stod(f[6]), std::stoul(f[7])});
        } catch (const std::exception&) {
            throw Error(ErrorCode::UnreadableStream, "malformed scores row at line " + std::to_string(i + 1));
        }
    }
    return out;
}

// ---- profit -------------------------------------------------------------------

inline constexpr std::string_view kProfitsHeader = "insider_id,company,date,side,amount";

inline std::string profits_csv(std::span<const ProfitPoint> points) {
    std::string out(kProfitsHeader);
    out += '\n';
    for (const auto& p : points)
        out += csv::quote(p.insider_id) + "," + csv::quote(p.company) + "," + p.date.to_string() + "," +
               side_code(p.side) + "," + fixed6(p.amount) + "\n";
    return out;
}

inline std::vector<ProfitPoint> parse_profits_csv(std::istream& in) {
    auto lines = csv::read_lines(in);
    if (lines.empty() || lines.front() != kProfitsHeader)
        throw Error(ErrorCode::UnreadableStream, "profits CSV header mismatch");
    std::vector<ProfitPoint> out;
    std::vector<std::string> f;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty())
            continue;
        auto date = csv::split_line(lines[i], f) && f.size() == 5 ? Date::parse(f[2]) : std::nullopt;
        auto side = date ? parse_side(f[3]) : std::nullopt;
        if (!side)
            throw Error(ErrorCode::UnreadableStream, "malformed profits row at line " + std::to_string(i + 1));
        out.push_back({f[0], f[1], *date, *side, std::stod(f[4])});
    }
    return out;
}

// ---- DOT ----------------------------------------------------------------------

namespace detail {

inline std::string dot_id(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "\"";
}

inline std::string weight_label(double w, SimilarityMode mode) {
    if (mode == SimilarityMode::Lcs)
        return std::to_string(static_cast<long long>(std::llround(w)));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", w);
    return buf;
}

} // namespace detail

/// Nodes in id order; edges labelled with their weight (LCS length or S).
inline std::string network_dot(const InsiderNetwork& net) {
    if (net.empty())
        throw Error(ErrorCode::EmptyStructure, "network has no nodes");
    std::string out = "graph insiders {\n";
    for (const auto& id : net.nodes())
        out += "  " + detail::dot_id(id) + ";\n";
    for (const auto& e : net.edges())
        out += "  " + detail::dot_id(net.nodes()[e.a]) + " -- " + detail::dot_id(net.nodes()[e.b]) + " [label=\"" +
               detail::weight_label(e.weight, net.config().mode) + "\"];\n";
    return out + "}\n";
}

/// The ego is drawn filled red; other members plain.
inline std::string egonet_dot(const Egonet& ego, SimilarityMode mode = SimilarityMode::Lcs) {
    if (ego.members.empty())
        throw Error(ErrorCode::EmptyStructure, "egonet has no members");
    std::string out = "graph egonet {\n";
    for (const auto& id : ego.members) {
        out += "  " + detail::dot_id(id);
        if (id == ego.ego)
            out += " [style=filled, fillcolor=red]";
        out += ";\n";
    }
    for (const auto& e : ego.edges)
        out += "  " + detail::dot_id(ego.members[e.a]) + " -- " + detail::dot_id(ego.members[e.b]) + " [label=\"" +
               detail::weight_label(e.weight, mode) + "\"];\n";
    return out + "}\n";
}

/// Each hyperedge is drawn as a clique whose edges share one colour and the
/// annotation "h<index>: <company> len=<length>".
inline std::string hypergraph_dot(const Hypergraph& h) {
    if (h.hyperedges.empty())
        throw Error(ErrorCode::EmptyStructure, "hypergraph has no hyperedges");
    static constexpr const char* palette[] = {"red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "teal"};
    std::string out = "graph hypergraph {\n";
    for (const auto& id : h.vertices)
        out += "  " + detail::dot_id(id) + ";\n";
    for (std::size_t k = 0; k < h.hyperedges.size(); ++k) {
        const auto& e = h.hyperedges[k];
        const std::string label = "h" + std::to_string(k) + ": " + e.company + " len=" + std::to_string(e.length());
        const std::string attrs = " [label=" + detail::dot_id(label) + ", color=" + palette[k % std::size(palette)] + "];\n";
        for (std::size_t i = 0; i < e.members.size(); ++i)
            for (std::size_t j = i + 1; j < e.members.size(); ++j)
                out += "  " + detail::dot_id(e.members[i]) + " -- " + detail::dot_id(e.members[j]) + attrs;
    }
    return out + "}\n";
}

inline void export_dot(const InsiderNetwork& net, const std::string& path) { write_file(path, network_dot(net)); }
inline void export_dot(const Egonet& ego, const std::string& path, SimilarityMode mode = SimilarityMode::Lcs) {
    write_file(path, egonet_dot(ego, mode));
}
inline void export_dot(const Hypergraph& h, const std::string& path) { write_file(path, hypergraph_dot(h)); }

} // namespace insidernet
