#pragma once

// Multi-way co-trading groups. For sorted distinct date lists a common
// subsequence of several insiders is exactly the intersection of their date
// sets, so a hyperedge is a maximal insider set (size >= 2, one company) whose
// joint date intersection has at least t dates. Seen from the dates, these are
// the maximal frequent itemsets over insiders with minimum support t, mined
// here by depth-first enumeration over date bitsets.

#include "network.hpp"
#include "parallel.hpp"
#include "similarity.hpp"
#include "types.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace insidernet {

struct Hyperedge {
    std::string company;
    Side side = Side::Sale;
    std::vector<std::string> members; ///< sorted
    std::vector<Date> witness;        ///< dates shared by every member

    std::size_t length() const noexcept { return witness.size(); }
    friend bool operator==(const Hyperedge&, const Hyperedge&) = default;
};

struct Hypergraph {
    Side side = Side::Sale;
    std::vector<std::string> vertices; ///< sorted union of members
    std::vector<Hyperedge> hyperedges;
};

namespace detail {

class DateBitset {
public:
    DateBitset() = default;
    explicit DateBitset(std::size_t bits, bool fill = false)
        : words_((bits + 63) / 64, fill ? ~std::uint64_t{0} : 0), bits_(bits) {
        if (fill && bits % 64 != 0)
            words_.back() = (std::uint64_t{1} << (bits % 64)) - 1;
    }

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
    std::size_t size() const noexcept { return bits_; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    std::size_t and_count(const DateBitset& o) const {
        std::size_t c = 0;
        for (std::size_t k = 0; k < words_.size(); ++k)
            c += static_cast<std::size_t>(std::popcount(words_[k] & o.words_[k]));
        return c;
    }

    DateBitset operator&(const DateBitset& o) const {
        DateBitset r = *this;
        for (std::size_t k = 0; k < words_.size(); ++k)
            r.words_[k] &= o.words_[k];
        return r;
    }

    /// this ⊆ o
    bool subset_of(const DateBitset& o) const {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~o.words_[k])
                return false;
        return true;
    }

private:
    std::vector<std::uint64_t> words_;
    std::size_t bits_ = 0;
};

// Maximal item sets (size >= 2) whose tidset intersection holds >= min_support
// bits. Items are enumerated in index order; a leaf is reported only when no
// previously reported set contains it, and supersets that extend a set with an
// earlier item are always reached first, so reports are exactly the maximal sets.
class MaximalSetMiner {
public:
    MaximalSetMiner(const std::vector<DateBitset>& tids, std::size_t min_support)
        : tids_(tids), min_support_(min_support) {}

    std::vector<std::vector<std::size_t>> run() {
        std::vector<std::size_t> roots;
        for (std::size_t i = 0; i < tids_.size(); ++i)
            if (tids_[i].count() >= min_support_)
                roots.push_back(i);
        if (roots.size() < 2)
            return {};
        std::vector<std::size_t> prefix;
        const DateBitset all(tids_.front().size(), true);
        extend(prefix, all, roots);
        return std::move(found_);
    }

private:
    void extend(std::vector<std::size_t>& prefix, const DateBitset& prefix_tids,
                const std::vector<std::size_t>& cands) {
        if (cands.empty()) {
            report(prefix);
            return;
        }
        // Whole remaining tail frequent: it is the only maximal set below this node.
        DateBitset tail = prefix_tids;
        for (std::size_t c : cands)
            tail = tail & tids_[c];
        std::vector<std::size_t> full = prefix;
        full.insert(full.end(), cands.begin(), cands.end());
        if (tail.count() >= min_support_) {
            report(full);
            return;
        }
        if (subsumed(item_mask(full)))
            return;

        for (std::size_t k = 0; k < cands.size(); ++k) {
            const DateBitset next_tids = prefix_tids & tids_[cands[k]];
            std::vector<std::size_t> next;
            for (std::size_t m = k + 1; m < cands.size(); ++m)
                if (next_tids.and_count(tids_[cands[m]]) >= min_support_)
                    next.push_back(cands[m]);
            prefix.push_back(cands[k]);
            extend(prefix, next_tids, next);
            prefix.pop_back();
        }
    }

    DateBitset item_mask(const std::vector<std::size_t>& items) const {
        DateBitset mask(tids_.size());
        for (std::size_t i : items)
            mask.set(i);
        return mask;
    }

    bool subsumed(const DateBitset& mask) const {
        return std::any_of(masks_.begin(), masks_.end(), [&](const DateBitset& m) { return mask.subset_of(m); });
    }

    void report(const std::vector<std::size_t>& items) {
        if (items.size() < 2)
            return;
        auto mask = item_mask(items);
        if (subsumed(mask))
            return;
        masks_.push_back(std::move(mask));
        std::vector<std::size_t> sorted = items;
        std::sort(sorted.begin(), sorted.end());
        found_.push_back(std::move(sorted));
    }

    const std::vector<DateBitset>& tids_;
    std::size_t min_support_;
    std::vector<DateBitset> masks_;
    std::vector<std::vector<std::size_t>> found_;
};

inline std::vector<Hyperedge> mine_company(const std::string& company, Side side,
                                           const std::vector<const DateSequence*>& seqs, std::size_t t) {
    std::vector<const DateSequence*> items;
    for (const auto* s : seqs)
        if (s->dates.size() >= t)
            items.push_back(s);
    if (items.size() < 2)
        return {};

    std::vector<Date> calendar;
    for (const auto* s : items)
        calendar.insert(calendar.end(), s->dates.begin(), s->dates.end());
    std::sort(calendar.begin(), calendar.end());
    calendar.erase(std::unique(calendar.begin(), calendar.end()), calendar.end());

    std::vector<DateBitset> tids;
    tids.reserve(items.size());
    for (const auto* s : items) {
        DateBitset b(calendar.size());
        for (Date d : s->dates)
            b.set(static_cast<std::size_t>(std::lower_bound(calendar.begin(), calendar.end(), d) - calendar.begin()));
        tids.push_back(std::move(b));
    }

    std::vector<Hyperedge> out;
    for (const auto& set : MaximalSetMiner(tids, t).run()) {
        Hyperedge h;
        h.company = company;
        h.side = side;
        DateBitset common(calendar.size(), true);
        for (std::size_t i : set) {
            h.members.push_back(items[i]->insider_id);
            common = common & tids[i];
        }
        for (std::size_t d = 0; d < calendar.size(); ++d)
            if (common.test(d))
                h.witness.push_back(calendar[d]);
        out.push_back(std::move(h));
    }
    return out;
}

} // namespace detail

/// Mines all maximal co-trading groups for one side using the side's LCS threshold.
/// Ordered by company, then decreasing member count, then members.
inline Hypergraph mine_hyperedges(const std::vector<DateSequence>& sequences, Side side,
                                  const SimilarityConfig& config, std::size_t threads = 1) {
    config.validate();
    const std::size_t t = config.lcs_threshold(side);
    const auto groups = detail::group_by_company(sequences, side);
    std::vector<std::vector<Hyperedge>> per_company(groups.companies.size());
    parallel_for(groups.companies.size(), threads, [&](std::size_t c) {
        per_company[c] = detail::mine_company(groups.companies[c], side, groups.members[c], t);
        std::sort(per_company[c].begin(), per_company[c].end(), [](const Hyperedge& x, const Hyperedge& y) {
            if (x.members.size() != y.members.size())
                return x.members.size() > y.members.size();
            return x.members < y.members;
        });
    });

    Hypergraph h;
    h.side = side;
    for (auto& edges : per_company)
        for (auto& e : edges)
            h.hyperedges.push_back(std::move(e));
    for (const auto& e : h.hyperedges)
        h.vertices.insert(h.vertices.end(), e.members.begin(), e.members.end());
    std::sort(h.vertices.begin(), h.vertices.end());
    h.vertices.erase(std::unique(h.vertices.begin(), h.vertices.end()), h.vertices.end());
    return h;
}

struct SizeBucket {
    std::size_t count = 0;
    double percent = 0.0;
};

/// Hyperedge count and share (in percent) per member-set size.
inline std::map<std::size_t, SizeBucket> hyperedge_size_distribution(const Hypergraph& h) {
    std::map<std::size_t, SizeBucket> out;
    for (const auto& e : h.hyperedges)
        ++out[e.members.size()].count;
    for (auto& [size, bucket] : out)
        bucket.percent = 100.0 * static_cast<double>(bucket.count) / static_cast<double>(h.hyperedges.size());
    return out;
}

struct MultiEdgeInsider {
    std::string insider_id;
    std::vector<std::size_t> hyperedges; ///< indices into Hypergraph::hyperedges

    friend bool operator==(const MultiEdgeInsider&, const MultiEdgeInsider&) = default;
};

/// Insiders incident to at least `min_edges` hyperedges, most incident first (ties by id).
inline std::vector<MultiEdgeInsider> multi_edge_insiders(const Hypergraph& h, std::size_t min_edges) {
    if (min_edges < 2)
        throw Error(ErrorCode::InvalidConfig, "min_edges must be at least 2");
    std::map<std::string, std::vector<std::size_t>> incidence;
    for (std::size_t k = 0; k < h.hyperedges.size(); ++k)
        for (const auto& m : h.hyperedges[k].members)
            incidence[m].push_back(k);
    std::vector<MultiEdgeInsider> out;
    for (auto& [id, edges] : incidence)
        if (edges.size() >= min_edges)
            out.push_back({id, std::move(edges)});
    std::stable_sort(out.begin(), out.end(), [](const MultiEdgeInsider& x, const MultiEdgeInsider& y) {
        return x.hyperedges.size() > y.hyperedges.size();
    });
    return out;
}

} // namespace insidernet
