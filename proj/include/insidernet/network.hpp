#pragma once

// Co-trading networks over insiders. Similarity is only ever evaluated between
// two insiders of the same company; an insider trading several companies can
// connect otherwise separate groups.

#include "error.hpp"
#include "parallel.hpp"
#include "similarity.hpp"
#include "types.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace insidernet {

using NodeId = std::uint32_t;

struct NetworkEdge {
    NodeId a = 0; ///< a < b
    NodeId b = 0;
    double weight = 0.0;
    std::string company;

    friend bool operator==(const NetworkEdge&, const NetworkEdge&) = default;
};

class InsiderNetwork {
public:
    InsiderNetwork() = default;

    /// `edges` may reference ids in any order; nodes without edges are dropped.
    InsiderNetwork(Side side, SimilarityConfig config, std::vector<std::string> ids,
                   std::vector<NetworkEdge> edges)
        : side_(side), config_(config) {
        std::vector<bool> used(ids.size(), false);
        for (const auto& e : edges)
            used[e.a] = used[e.b] = true;
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (used[i])
                order.push_back(i);
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return ids[x] < ids[y]; });
        std::vector<NodeId> remap(ids.size(), 0);
        for (std::size_t k = 0; k < order.size(); ++k) {
            remap[order[k]] = static_cast<NodeId>(k);
            nodes_.push_back(std::move(ids[order[k]]));
        }
        for (auto& e : edges) {
            NodeId a = remap[e.a], b = remap[e.b];
            if (b < a)
                std::swap(a, b);
            edges_.push_back({a, b, e.weight, std::move(e.company)});
        }
        std::sort(edges_.begin(), edges_.end(),
                  [](const NetworkEdge& x, const NetworkEdge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
        adjacency_.assign(nodes_.size(), {});
        for (std::size_t k = 0; k < edges_.size(); ++k) {
            adjacency_[edges_[k].a].push_back(edges_[k].b);
            adjacency_[edges_[k].b].push_back(edges_[k].a);
        }
        for (auto& adj : adjacency_)
            std::sort(adj.begin(), adj.end());
        for (NodeId i = 0; i < nodes_.size(); ++i)
            index_.emplace(nodes_[i], i);
    }

    Side side() const noexcept { return side_; }
    const SimilarityConfig& config() const noexcept { return config_; }
    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    const std::vector<NetworkEdge>& edges() const noexcept { return edges_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }

    const std::vector<NodeId>& neighbors(NodeId u) const { return adjacency_.at(u); }

    std::optional<NodeId> find(std::string_view id) const {
        auto it = index_.find(std::string(id));
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    NodeId index_of(std::string_view id) const {
        auto idx = find(id);
        if (!idx)
            throw Error(ErrorCode::UnknownNode, std::string(id));
        return *idx;
    }

    bool adjacent(NodeId a, NodeId b) const {
        const auto& adj = adjacency_.at(a);
        return std::binary_search(adj.begin(), adj.end(), b);
    }

    const NetworkEdge* edge(NodeId a, NodeId b) const {
        if (b < a)
            std::swap(a, b);
        auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{a, b},
                                   [](const NetworkEdge& e, const std::pair<NodeId, NodeId>& k) {
                                       return std::tie(e.a, e.b) < std::tie(k.first, k.second);
                                   });
        if (it == edges_.end() || it->a != a || it->b != b)
            return nullptr;
        return &*it;
    }

private:
    Side side_ = Side::Sale;
    SimilarityConfig config_;
    std::vector<std::string> nodes_;
    std::vector<NetworkEdge> edges_;
    std::vector<std::vector<NodeId>> adjacency_;
    std::unordered_map<std::string, NodeId> index_;
};

/// Pairwise edge weight under `config`, or nullopt when the pair does not qualify.
inline std::optional<double> pair_weight(const DateSequence& x, const DateSequence& y, Side side,
                                         const SimilarityConfig& config) {
    if (config.mode == SimilarityMode::Overlap) {
        const double s = similarity_s(x, y);
        return s >= config.overlap_threshold ? std::optional<double>(s) : std::nullopt;
    }
    // Sorted distinct dates: the longest common subsequence is the intersection.
    const std::size_t len = config.lcs_variant == LcsVariant::Subsequence
                                ? common_date_count(x.dates, y.dates)
                                : lcs_contiguous_length(x.dates, y.dates);
    return len >= config.lcs_threshold(side) ? std::optional<double>(static_cast<double>(len)) : std::nullopt;
}

namespace detail {

/// Sequences of one side grouped by company (both in sorted order).
struct CompanyGroups {
    std::vector<std::string> companies;
    std::vector<std::vector<const DateSequence*>> members;
};

inline CompanyGroups group_by_company(const std::vector<DateSequence>& sequences, Side side) {
    std::map<std::string, std::vector<const DateSequence*>> by_company;
    for (const auto& s : sequences)
        if (s.side == side)
            by_company[s.company].push_back(&s);
    CompanyGroups g;
    for (auto& [company, seqs] : by_company) {
        std::sort(seqs.begin(), seqs.end(),
                  [](const DateSequence* x, const DateSequence* y) { return x->insider_id < y->insider_id; });
        g.companies.push_back(company);
        g.members.push_back(std::move(seqs));
    }
    return g;
}

} // namespace detail

/// Builds the network for one side. Pairs are enumerated within each company;
/// an insider pair linked through several companies keeps the largest weight
/// (ties: lexicographically smallest company).
inline InsiderNetwork build_network(const std::vector<DateSequence>& sequences, Side side,
                                    const SimilarityConfig& config, std::size_t threads = 1) {
    config.validate();
    const auto groups = detail::group_by_company(sequences, side);

    struct Candidate {
        const std::string* a;
        const std::string* b;
        double weight;
    };
    std::vector<std::vector<Candidate>> per_company(groups.companies.size());
    parallel_for(groups.companies.size(), threads, [&](std::size_t c) {
        const auto& seqs = groups.members[c];
        for (std::size_t i = 0; i < seqs.size(); ++i)
            for (std::size_t j = i + 1; j < seqs.size(); ++j)
                if (auto w = pair_weight(*seqs[i], *seqs[j], side, config))
                    per_company[c].push_back({&seqs[i]->insider_id, &seqs[j]->insider_id, *w});
    });

    std::vector<std::string> ids;
    // Keys view the id strings owned by `sequences`.
    std::unordered_map<std::string_view, NodeId> id_index;
    auto intern = [&](const std::string& id) {
        auto [it, inserted] = id_index.emplace(id, static_cast<NodeId>(ids.size()));
        if (inserted)
            ids.push_back(id);
        return it->second;
    };
    std::map<std::pair<NodeId, NodeId>, std::size_t> best;
    std::vector<NetworkEdge> edges;
    for (std::size_t c = 0; c < per_company.size(); ++c) {
        for (const auto& cand : per_company[c]) {
            NodeId a = intern(*cand.a), b = intern(*cand.b);
            if (b < a)
                std::swap(a, b);
            auto [it, inserted] = best.emplace(std::pair{a, b}, edges.size());
            if (inserted) {
                edges.push_back({a, b, cand.weight, groups.companies[c]});
            } else if (cand.weight > edges[it->second].weight) {
                // Companies are visited in ascending order, so equal weights keep the first.
                edges[it->second].weight = cand.weight;
                edges[it->second].company = groups.companies[c];
            }
        }
    }
    return InsiderNetwork(side, config, std::move(ids), std::move(edges));
}

/// Node sets of all connected components, each sorted by id; components
/// ordered by decreasing size, then by smallest member.
inline std::vector<std::vector<std::string>> connected_components(const InsiderNetwork& net) {
    const std::size_t n = net.node_count();
    std::vector<NodeId> parent(n);
    std::iota(parent.begin(), parent.end(), NodeId{0});
    auto find = [&](NodeId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& e : net.edges()) {
        NodeId ra = find(e.a), rb = find(e.b);
        if (ra != rb)
            parent[std::max(ra, rb)] = std::min(ra, rb);
    }
    std::map<NodeId, std::vector<std::string>> by_root;
    for (NodeId i = 0; i < n; ++i)
        by_root[find(i)].push_back(net.nodes()[i]);
    std::vector<std::vector<std::string>> out;
    for (auto& [root, members] : by_root)
        out.push_back(std::move(members));
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.size() != y.size())
            return x.size() > y.size();
        return x.front() < y.front();
    });
    return out;
}

struct NetworkStats {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t components = 0;
    std::map<std::size_t, std::size_t> component_sizes; ///< size -> count

    friend bool operator==(const NetworkStats&, const NetworkStats&) = default;
};

inline NetworkStats network_stats(const InsiderNetwork& net) {
    NetworkStats s;
    s.nodes = net.node_count();
    s.edges = net.edge_count();
    const auto comps = connected_components(net);
    s.components = comps.size();
    for (const auto& c : comps)
        ++s.component_sizes[c.size()];
    return s;
}

struct Egonet {
    std::string ego;
    std::size_t v_count = 0;
    std::size_t e_count = 0;
    std::vector<std::string> members; ///< sorted, includes the ego
    std::vector<NetworkEdge> edges;   ///< induced edges, endpoints index `members`
};

/// Subgraph induced by the ego and its direct neighbours.
inline Egonet egonet(const InsiderNetwork& net, std::string_view ego) {
    const NodeId u = net.index_of(ego);
    std::vector<NodeId> local = net.neighbors(u);
    local.insert(std::upper_bound(local.begin(), local.end(), u), u);

    Egonet out;
    out.ego = std::string(ego);
    out.v_count = local.size();
    for (NodeId x : local)
        out.members.push_back(net.nodes()[x]);
    for (std::size_t i = 0; i < local.size(); ++i)
        for (std::size_t j = i + 1; j < local.size(); ++j)
            if (const auto* e = net.edge(local[i], local[j]))
                out.edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), e->weight, e->company});
    out.e_count = out.edges.size();
    return out;
}

struct EgoStats {
    std::string id;
    std::size_t v = 0;
    std::size_t e = 0;

    friend bool operator==(const EgoStats&, const EgoStats&) = default;
};

/// (V_u, E_u) for every node, in node order. E_u = deg(u) + edges among neighbours.
inline std::vector<EgoStats> egonet_stats(const InsiderNetwork& net) {
    const std::size_t n = net.node_count();
    std::vector<EgoStats> out(n);
    std::vector<std::uint8_t> mark(n, 0);
    for (NodeId u = 0; u < n; ++u) {
        const auto& nu = net.neighbors(u);
        for (NodeId v : nu)
            mark[v] = 1;
        std::size_t among = 0;
        for (NodeId v : nu)
            for (NodeId w : net.neighbors(v))
                if (w > v && mark[w])
                    ++among;
        for (NodeId v : nu)
            mark[v] = 0;
        out[u] = {net.nodes()[u], nu.size() + 1, nu.size() + among};
    }
    return out;
}

} // namespace insidernet
