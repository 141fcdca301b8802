#pragma once

#include "error.hpp"
#include "types.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace insidernet {

enum class SimilarityMode : std::uint8_t { Overlap, Lcs };
enum class LcsVariant : std::uint8_t { Subsequence, ContiguousRun };

inline std::string_view to_string(SimilarityMode m) { return m == SimilarityMode::Overlap ? "overlap" : "lcs"; }
inline std::string_view to_string(LcsVariant v) {
    return v == LcsVariant::Subsequence ? "subsequence" : "contiguous";
}

struct SimilarityConfig {
    SimilarityMode mode = SimilarityMode::Lcs;
    double overlap_threshold = 0.5;
    std::size_t lcs_threshold_sale = 5;
    std::size_t lcs_threshold_purchase = 10;
    LcsVariant lcs_variant = LcsVariant::Subsequence;

    std::size_t lcs_threshold(Side side) const {
        return side == Side::Sale ? lcs_threshold_sale : lcs_threshold_purchase;
    }

    void validate() const {
        if (!(overlap_threshold >= 0.0 && overlap_threshold <= 1.0))
            throw Error(ErrorCode::InvalidConfig, "overlap_threshold must lie in [0, 1]");
        if (lcs_threshold_sale < 2 || lcs_threshold_purchase < 2)
            throw Error(ErrorCode::InvalidConfig, "LCS thresholds must be at least 2");
    }

    friend bool operator==(const SimilarityConfig&, const SimilarityConfig&) = default;
};

namespace detail {

inline void require_same_group(const DateSequence& x, const DateSequence& y) {
    if (x.company != y.company || x.side != y.side)
        throw Error(ErrorCode::CompanyMismatch,
                    x.insider_id + "@" + x.company + " vs " + y.insider_id + "@" + y.company);
}

} // namespace detail

/// Number of index pairs (i, j) with x[i] == y[j], for sorted inputs.
/// Runs of equal dates contribute the product of their lengths, so this is
/// the indicator double sum evaluated by a merge.
inline std::uint64_t matching_pair_count(std::span<const Date> x, std::span<const Date> y) {
    std::uint64_t count = 0;
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i] < y[j]) {
            ++i;
        } else if (y[j] < x[i]) {
            ++j;
        } else {
            const Date d = x[i];
            std::uint64_t a = 0, b = 0;
            while (i < x.size() && x[i] == d) {
                ++i;
                ++a;
            }
            while (j < y.size() && y[j] == d) {
                ++j;
                ++b;
            }
            count += a * b;
        }
    }
    return count;
}

/// Squared count of matching date pairs over the product of the sequence sizes.
inline double similarity_s(std::span<const Date> x, std::span<const Date> y) {
    if (x.empty() || y.empty())
        throw Error(ErrorCode::EmptySequence, "similarity of an empty date sequence");
    const double m = static_cast<double>(matching_pair_count(x, y));
    return (m * m) / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

inline double similarity_s(const DateSequence& x, const DateSequence& y) {
    detail::require_same_group(x, y);
    return similarity_s(std::span<const Date>(x.dates), std::span<const Date>(y.dates));
}

/// Classical longest common subsequence, O(|x|·|y|) time and O(|y|) memory.
inline std::size_t lcs_subsequence_length(std::span<const Date> x, std::span<const Date> y) {
    if (x.size() < y.size())
        std::swap(x, y);
    std::vector<std::uint32_t> prev(y.size() + 1, 0), cur(y.size() + 1, 0);
    for (std::size_t i = 1; i <= x.size(); ++i) {
        for (std::size_t j = 1; j <= y.size(); ++j)
            cur[j] = x[i - 1] == y[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        std::swap(prev, cur);
    }
    return prev[y.size()];
}

/// Longest run of dates that is contiguous in both lists (longest common substring).
inline std::size_t lcs_contiguous_length(std::span<const Date> x, std::span<const Date> y) {
    std::vector<std::uint32_t> prev(y.size() + 1, 0), cur(y.size() + 1, 0);
    std::uint32_t best = 0;
    for (std::size_t i = 1; i <= x.size(); ++i) {
        for (std::size_t j = 1; j <= y.size(); ++j) {
            cur[j] = x[i - 1] == y[j - 1] ? prev[j - 1] + 1 : 0;
            best = std::max(best, cur[j]);
        }
        std::swap(prev, cur);
    }
    return best;
}

inline std::size_t lcs_length(std::span<const Date> x, std::span<const Date> y, LcsVariant variant) {
    return variant == LcsVariant::Subsequence ? lcs_subsequence_length(x, y) : lcs_contiguous_length(x, y);
}

inline std::size_t lcs_length(const DateSequence& x, const DateSequence& y,
                              LcsVariant variant = LcsVariant::Subsequence) {
    detail::require_same_group(x, y);
    return lcs_length(std::span<const Date>(x.dates), std::span<const Date>(y.dates), variant);
}

namespace detail {

// Lexicographically smallest longest common subsequence. suffix[i][j] is the
// LCS length of x[i..] and y[j..]; each step picks the smallest date whose
// earliest joint occurrence still leaves enough room for the remainder.
inline std::vector<Date> lcs_subsequence_witness(std::span<const Date> x, std::span<const Date> y) {
    const std::size_t n = x.size(), m = y.size();
    std::vector<std::uint32_t> suffix((n + 1) * (m + 1), 0);
    auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return suffix[i * (m + 1) + j]; };
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t j = m; j-- > 0;)
            at(i, j) = x[i] == y[j] ? at(i + 1, j + 1) + 1 : std::max(at(i + 1, j), at(i, j + 1));

    // Positions of each date in y, ordered by (date, position).
    std::vector<std::pair<Date, std::size_t>> y_pos(m);
    for (std::size_t b = 0; b < m; ++b)
        y_pos[b] = {y[b], b};
    std::sort(y_pos.begin(), y_pos.end());

    std::vector<Date> out;
    std::size_t i = 0, j = 0;
    while (at(i, j) > 0) {
        const std::uint32_t need = at(i, j);
        bool found = false;
        Date best{};
        std::size_t bi = 0, bj = 0;
        for (std::size_t a = i; a < n; ++a) {
            if (found && !(x[a] < best))
                continue;
            auto it = std::lower_bound(y_pos.begin(), y_pos.end(), std::pair{x[a], j});
            if (it == y_pos.end() || it->first != x[a])
                continue;
            const std::size_t b = it->second;
            if (at(a + 1, b + 1) + 1 == need) {
                found = true;
                best = x[a];
                bi = a;
                bj = b;
            }
        }
        out.push_back(best);
        i = bi + 1;
        j = bj + 1;
    }
    return out;
}

inline std::vector<Date> lcs_contiguous_witness(std::span<const Date> x, std::span<const Date> y) {
    std::vector<std::uint32_t> prev(y.size() + 1, 0), cur(y.size() + 1, 0);
    std::uint32_t best = 0;
    std::vector<Date> best_run;
    for (std::size_t i = 1; i <= x.size(); ++i) {
        for (std::size_t j = 1; j <= y.size(); ++j) {
            cur[j] = x[i - 1] == y[j - 1] ? prev[j - 1] + 1 : 0;
            if (cur[j] == 0 || cur[j] < best)
                continue;
            std::vector<Date> run(x.begin() + static_cast<std::ptrdiff_t>(i - cur[j]),
                                  x.begin() + static_cast<std::ptrdiff_t>(i));
            if (cur[j] > best || run < best_run) {
                best = cur[j];
                best_run = std::move(run);
            }
        }
        std::swap(prev, cur);
    }
    return best_run;
}

} // namespace detail

/// One longest common subsequence; among ties the lexicographically earliest by date.
inline std::vector<Date> lcs_witness(std::span<const Date> x, std::span<const Date> y, LcsVariant variant) {
    return variant == LcsVariant::Subsequence ? detail::lcs_subsequence_witness(x, y)
                                              : detail::lcs_contiguous_witness(x, y);
}

inline std::vector<Date> lcs_witness(const DateSequence& x, const DateSequence& y,
                                     LcsVariant variant = LcsVariant::Subsequence) {
    detail::require_same_group(x, y);
    return lcs_witness(std::span<const Date>(x.dates), std::span<const Date>(y.dates), variant);
}

/// |x ∩ y| for sorted duplicate-free inputs.
inline std::size_t common_date_count(std::span<const Date> x, std::span<const Date> y) {
    std::size_t count = 0;
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i] < y[j])
            ++i;
        else if (y[j] < x[i])
            ++j;
        else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

} // namespace insidernet
