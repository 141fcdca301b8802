#pragma once

// Egonet outlier ranking: a least-squares power law E = c * V^a fitted on the
// per-V median edge counts, a deviation score against that law, and a local
// outlier factor over (ln V, ln E). The total score is their sum.

#include "error.hpp"
#include "network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace insidernet {

struct FitPoint {
    double v = 0.0;
    double median_e = 0.0;

    friend bool operator==(const FitPoint&, const FitPoint&) = default;
};

struct PowerLawFit {
    double exponent = 0.0;
    double intercept = 0.0; ///< natural log of the coefficient
    std::vector<FitPoint> points;

    double coefficient() const { return std::exp(intercept); }
    double operator()(double v) const { return std::exp(intercept) * std::pow(v, exponent); }
};

struct EgoPoint {
    double v = 0.0;
    double e = 0.0;
};

struct PowerLawOptions {
    /// Logarithmic bin base for grouping V values; 0 groups by exact V.
    double bin_base = 0.0;
};

namespace detail {

inline double lower_median(std::vector<double>& values) {
    const std::size_t mid = (values.size() - 1) / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    return values[mid];
}

} // namespace detail

/// Ordinary least squares of ln(median E) on ln V, one point per distinct V
/// (or per logarithmic bin of V when options.bin_base > 1).
inline PowerLawFit fit_power_law(std::span<const EgoPoint> egos, const PowerLawOptions& options = {}) {
    if (options.bin_base != 0.0 && !(options.bin_base > 1.0))
        throw Error(ErrorCode::InvalidConfig, "bin_base must be 0 or greater than 1");
    for (const auto& p : egos)
        if (!(p.v > 0.0) || !(p.e > 0.0))
            throw Error(ErrorCode::DegenerateInput, "egonet sizes must be positive");

    std::map<long long, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (const auto& p : egos) {
        long long key;
        if (options.bin_base > 1.0)
            key = static_cast<long long>(std::floor(std::log(p.v) / std::log(options.bin_base) + 1e-12));
        else
            key = static_cast<long long>(std::llround(p.v * 1e6));
        groups[key].first.push_back(p.v);
        groups[key].second.push_back(p.e);
    }
    if (groups.size() < 2)
        throw Error(ErrorCode::DegenerateInput, "power-law fit needs at least two distinct V values");

    PowerLawFit fit;
    for (auto& [key, ve] : groups)
        fit.points.push_back({detail::lower_median(ve.first), detail::lower_median(ve.second)});

    const double n = static_cast<double>(fit.points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : fit.points) {
        mx += std::log(p.v);
        my += std::log(p.median_e);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (const auto& p : fit.points) {
        const double dx = std::log(p.v) - mx;
        sxy += dx * (std::log(p.median_e) - my);
        sxx += dx * dx;
    }
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    return fit;
}

/// max(E, f)/min(E, f) * ln(|E - f| + 1).
inline double outlier_score(double e, double f_v) {
    const double hi = std::max(e, f_v), lo = std::min(e, f_v);
    return (hi / lo) * std::log1p(std::abs(e - f_v));
}

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend auto operator<=>(const Point2&, const Point2&) = default;
};

struct LofOptions {
    /// Upper bound on local reachability density. A point whose neighbourhood
    /// is made of its own duplicates has zero reachability and gets this value.
    double lrd_cap = 1e10;
};

/// Local outlier factor with k-distance neighbourhoods (ties included) and
/// Euclidean distance. Identical points are collapsed and carried with a
/// multiplicity, which gives the same values as evaluating every copy.
inline std::vector<double> lof(std::span<const Point2> points, std::size_t k, const LofOptions& options = {}) {
    const std::size_t n = points.size();
    if (k < 1 || k >= n)
        throw Error(ErrorCode::DegenerateInput, "LOF requires 1 <= k < number of points");

    std::vector<Point2> distinct(points.begin(), points.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const std::size_t m = distinct.size();
    std::vector<std::size_t> mult(m, 0);
    std::vector<std::size_t> group_of(n);
    for (std::size_t i = 0; i < n; ++i) {
        group_of[i] = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), points[i]) -
                                               distinct.begin());
        ++mult[group_of[i]];
    }

    struct Neighbor {
        std::size_t group;
        std::size_t count;
        double dist;
    };
    std::vector<std::vector<Neighbor>> hood(m);
    std::vector<double> kdist(m, 0.0);
    std::vector<std::pair<double, std::size_t>> order(m);
    for (std::size_t g = 0; g < m; ++g) {
        for (std::size_t h = 0; h < m; ++h)
            order[h] = {std::hypot(distinct[g].x - distinct[h].x, distinct[g].y - distinct[h].y), h};
        std::sort(order.begin(), order.end());
        std::size_t seen = 0;
        double radius = 0.0;
        for (const auto& [d, h] : order) {
            const std::size_t c = h == g ? mult[h] - 1 : mult[h];
            if (c == 0)
                continue;
            if (seen >= k && d > radius)
                break;
            hood[g].push_back({h, c, d});
            seen += c;
            radius = d;
        }
        kdist[g] = radius;
    }

    std::vector<double> lrd(m);
    for (std::size_t g = 0; g < m; ++g) {
        double sum = 0.0;
        std::size_t size = 0;
        for (const auto& nb : hood[g]) {
            sum += static_cast<double>(nb.count) * std::max(kdist[nb.group], nb.dist);
            size += nb.count;
        }
        lrd[g] = sum > 0.0 ? std::min(static_cast<double>(size) / sum, options.lrd_cap) : options.lrd_cap;
    }

    std::vector<double> factor(m);
    for (std::size_t g = 0; g < m; ++g) {
        double sum = 0.0;
        std::size_t size = 0;
        for (const auto& nb : hood[g]) {
            sum += static_cast<double>(nb.count) * lrd[nb.group];
            size += nb.count;
        }
        factor[g] = sum / static_cast<double>(size) / lrd[g];
    }

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = factor[group_of[i]];
    return out;
}

struct AnomalyOptions {
    /// LOF neighbourhood size; 0 selects min(10, n - 1).
    std::size_t k = 0;
    PowerLawOptions fit;
    LofOptions lof;
    /// Min-max scale the score and LOF terms to [0, 1] before summing.
    bool normalize = false;
};

struct OutlierRecord {
    std::string insider_id;
    std::size_t v = 0;
    std::size_t e = 0;
    double f_v = 0.0;
    double score = 0.0;
    double lof = 0.0;
    double total = 0.0;
    std::size_t rank = 0;

    friend bool operator==(const OutlierRecord&, const OutlierRecord&) = default;
};

inline PowerLawFit fit_power_law(std::span<const EgoStats> egos, const PowerLawOptions& options = {}) {
    std::vector<EgoPoint> pts;
    pts.reserve(egos.size());
    for (const auto& s : egos)
        pts.push_back({static_cast<double>(s.v), static_cast<double>(s.e)});
    return fit_power_law(std::span<const EgoPoint>(pts), options);
}

namespace detail {

inline void min_max_scale(std::vector<double>& values) {
    if (values.empty())
        return;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double a = *lo, range = *hi - *lo;
    for (auto& v : values)
        v = range > 0.0 ? (v - a) / range : 0.0;
}

} // namespace detail

/// Score, LOF and total per ego, ordered by decreasing total (ties by id) with
/// 1-based ranks. With options.normalize the stored score and lof are the
/// scaled terms, so total == score + lof holds either way.
inline std::vector<OutlierRecord> total_outlier_scores(std::span<const EgoStats> egos, const PowerLawFit& fit,
                                                       const AnomalyOptions& options = {}) {
    const std::size_t n = egos.size();
    if (n < 2)
        throw Error(ErrorCode::DegenerateInput, "at least two egonets are required");
    const std::size_t k = options.k == 0 ? std::min<std::size_t>(10, n - 1) : options.k;

    std::vector<Point2> features(n);
    std::vector<double> scores(n), f_values(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = static_cast<double>(egos[i].v), e = static_cast<double>(egos[i].e);
        features[i] = {std::log(v), std::log(e)};
        f_values[i] = fit(v);
        scores[i] = outlier_score(e, f_values[i]);
    }
    std::vector<double> lofs = lof(features, k, options.lof);
    if (options.normalize) {
        detail::min_max_scale(scores);
        detail::min_max_scale(lofs);
    }

    std::vector<OutlierRecord> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = {egos[i].id, egos[i].v, egos[i].e, f_values[i], scores[i], lofs[i], scores[i] + lofs[i], 0};
    std::sort(out.begin(), out.end(), [](const OutlierRecord& a, const OutlierRecord& b) {
        if (a.total != b.total)
            return a.total > b.total;
        return a.insider_id < b.insider_id;
    });
    for (std::size_t i = 0; i < n; ++i)
        out[i].rank = i + 1;
    return out;
}

} // namespace insidernet
