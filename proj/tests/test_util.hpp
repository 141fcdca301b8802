#pragma once

#include <insidernet/insidernet.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace testutil {

using namespace insidernet;

inline Date day(int n) { return *Date::from_ymd(2014, 1, 1) + n; }

inline std::vector<Date> days(std::initializer_list<int> ns) {
    std::vector<Date> out;
    for (int n : ns)
        out.push_back(day(n));
    return out;
}

inline DateSequence seq(std::string id, std::string company, Side side, std::vector<Date> dates) {
    std::sort(dates.begin(), dates.end());
    dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
    const std::size_t n = dates.size();
    return {std::move(id), std::move(company), side, std::move(dates), n};
}

inline std::vector<Date> random_dates(std::mt19937_64& rng, int span, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(1, max_len);
    std::uniform_int_distribution<int> pick(0, span - 1);
    std::set<Date> s;
    const std::size_t n = len(rng);
    while (s.size() < n)
        s.insert(day(pick(rng)));
    return {s.begin(), s.end()};
}

// Three insiders of one company. (b) all share one 5-date sequence;
// (a) each pair shares its own 5 dates.
inline std::vector<DateSequence> shared_triple() {
    auto shared = days({2, 3, 4, 5, 6});
    return {seq("t1", "ACME", Side::Sale, shared), seq("t2", "ACME", Side::Sale, shared),
            seq("t3", "ACME", Side::Sale, shared)};
}

inline std::vector<DateSequence> pairwise_triple() {
    auto p12 = days({1, 2, 3, 4, 5}), p13 = days({11, 12, 13, 14, 15}), p23 = days({21, 22, 23, 24, 25});
    auto cat = [](std::vector<Date> a, const std::vector<Date>& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };
    return {seq("t1", "ACME", Side::Sale, cat(p12, p13)), seq("t2", "ACME", Side::Sale, cat(p12, p23)),
            seq("t3", "ACME", Side::Sale, cat(p13, p23))};
}

// Builds a network directly from an edge list over string ids.
inline InsiderNetwork graph(const std::vector<std::pair<std::string, std::string>>& edges, double weight = 5.0) {
    std::vector<std::string> ids;
    auto id_of = [&](const std::string& s) {
        auto it = std::find(ids.begin(), ids.end(), s);
        if (it != ids.end())
            return static_cast<NodeId>(it - ids.begin());
        ids.push_back(s);
        return static_cast<NodeId>(ids.size() - 1);
    };
    std::vector<NetworkEdge> out;
    for (const auto& [a, b] : edges) {
        NodeId x = id_of(a), y = id_of(b);
        out.push_back({std::min(x, y), std::max(x, y), weight, "ACME"});
    }
    return InsiderNetwork(Side::Sale, SimilarityConfig{}, ids, out);
}

inline std::vector<std::pair<std::string, std::string>> clique_edges(const std::vector<std::string>& members) {
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            out.emplace_back(members[i], members[j]);
    return out;
}

// Exhaustive oracle: every member subset (size >= 2) of one company whose date
// intersection has at least t dates, keeping only inclusion-maximal subsets.
inline std::set<std::pair<std::string, std::set<std::string>>> exhaustive_hyperedges(
    const std::vector<DateSequence>& seqs, Side side, std::size_t t) {
    std::map<std::string, std::vector<const DateSequence*>> by_company;
    for (const auto& s : seqs)
        if (s.side == side)
            by_company[s.company].push_back(&s);
    std::set<std::pair<std::string, std::set<std::string>>> out;
    for (const auto& [company, members] : by_company) {
        const std::size_t n = members.size();
        std::vector<std::uint32_t> qualifying;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (std::popcount(mask) < 2)
                continue;
            std::set<Date> common;
            bool first = true;
            for (std::size_t i = 0; i < n; ++i) {
                if (!(mask >> i & 1u))
                    continue;
                std::set<Date> d(members[i]->dates.begin(), members[i]->dates.end());
                if (first) {
                    common = d;
                    first = false;
                } else {
                    std::set<Date> keep;
                    for (Date x : common)
                        if (d.count(x))
                            keep.insert(x);
                    common = std::move(keep);
                }
            }
            if (common.size() >= t)
                qualifying.push_back(mask);
        }
        for (std::uint32_t mask : qualifying) {
            bool maximal = true;
            for (std::uint32_t other : qualifying)
                if (other != mask && (other & mask) == mask)
                    maximal = false;
            if (!maximal)
                continue;
            std::set<std::string> ids;
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1u)
                    ids.insert(members[i]->insider_id);
            out.insert({company, ids});
        }
    }
    return out;
}

inline std::set<std::pair<std::string, std::set<std::string>>> member_sets(const Hypergraph& h) {
    std::set<std::pair<std::string, std::set<std::string>>> out;
    for (const auto& e : h.hyperedges)
        out.insert({e.company, {e.members.begin(), e.members.end()}});
    return out;
}

// Random instance of one or two companies with at most `max_insiders`
// insiders per company over `span` distinct dates; dates cluster so that
// groups of size >= 3 actually occur.
inline std::vector<DateSequence> random_hyper_instance(std::mt19937_64& rng, std::size_t max_insiders, int span) {
    std::vector<DateSequence> out;
    std::uniform_int_distribution<std::size_t> n_ins(1, max_insiders);
    std::uniform_int_distribution<int> n_co(1, 2), pick(0, span - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int companies = n_co(rng);
    for (int c = 0; c < companies; ++c) {
        const std::size_t n = n_ins(rng);
        std::vector<int> core;
        for (int k = 0; k < 8; ++k)
            core.push_back(pick(rng));
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<Date> dates;
            const double keep = unit(rng);
            for (int d : core)
                if (unit(rng) < keep)
                    dates.push_back(day(d));
            const int extra = pick(rng) % 6;
            for (int k = 0; k < extra; ++k)
                dates.push_back(day(pick(rng)));
            out.push_back(seq("I" + std::to_string(i), "C" + std::to_string(c), Side::Sale, dates));
        }
    }
    return out;
}

// Textbook O(n^2) LOF evaluated on every point separately (no collapsing of
// duplicates); zero reachability sums use the same density cap.
inline std::vector<double> naive_lof(const std::vector<Point2>& pts, std::size_t k, double cap = 1e10) {
    const std::size_t n = pts.size();
    auto dist = [&](std::size_t i, std::size_t j) { return std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y); };
    std::vector<double> kdist(n);
    std::vector<std::vector<std::size_t>> hood(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> d;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                d.push_back(dist(i, j));
        std::sort(d.begin(), d.end());
        kdist[i] = d[k - 1];
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && dist(i, j) <= kdist[i])
                hood[i].push_back(j);
    }
    std::vector<double> lrd(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0;
        for (std::size_t j : hood[i])
            sum += std::max(kdist[j], dist(i, j));
        lrd[i] = sum > 0 ? std::min(static_cast<double>(hood[i].size()) / sum, cap) : cap;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0;
        for (std::size_t j : hood[i])
            sum += lrd[j];
        out[i] = sum / static_cast<double>(hood[i].size()) / lrd[i];
    }
    return out;
}

inline std::vector<Point2> grid(int side, double spacing = 1.0) {
    std::vector<Point2> out;
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j)
            out.push_back({i * spacing, j * spacing});
    return out;
}

} // namespace testutil
