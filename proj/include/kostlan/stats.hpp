#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "kostlan/rng.hpp"

namespace kostlan {

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::domain_error("mean of empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

// unbiased sample variance
inline double variance(std::span<const double> xs) {
    if (xs.size() < 2) throw std::domain_error("variance needs at least 2 samples");
    const double mu = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - mu) * (x - mu);
    return s / static_cast<double>(xs.size() - 1);
}

inline double stddev(std::span<const double> xs) { return std::sqrt(variance(xs)); }

inline double median_sorted(std::span<const double> sorted) {
    if (sorted.empty()) throw std::domain_error("median of empty sample");
    const std::size_t n = sorted.size();
    return (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

inline double median(std::span<const double> xs) {
    std::vector<double> tmp(xs.begin(), xs.end());
    std::sort(tmp.begin(), tmp.end());
    return median_sorted(tmp);
}

// linear-interpolation quantile on a sorted sample, q in [0, 1]
inline double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::domain_error("quantile of empty sample");
    if (q <= 0.0) return sorted.front();
    if (q >= 1.0) return sorted.back();
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct BootstrapSummary {
    Interval ci95;      // percentile interval
    double se = 0.0;    // standard deviation of the resampled statistic
};

enum class Statistic { mean, median };

// Seeded nonparametric bootstrap; resample draws are independent of sample order.
inline BootstrapSummary bootstrap(std::span<const double> xs, Statistic stat,
                                  std::size_t resamples, std::uint64_t seed) {
    if (xs.empty()) throw std::domain_error("bootstrap of empty sample");
    const std::size_t n = xs.size();
    std::vector<double> stats(resamples);
    std::vector<double> draw(n);
    for (std::size_t b = 0; b < resamples; ++b) {
        RandomStream rs(seed, b, /*tag=*/0xB007);
        for (std::size_t i = 0; i < n; ++i) draw[i] = xs[rs.uniform_below(n)];
        if (stat == Statistic::mean) {
            stats[b] = mean(draw);
        } else {
            std::sort(draw.begin(), draw.end());
            stats[b] = median_sorted(draw);
        }
    }
    std::sort(stats.begin(), stats.end());
    BootstrapSummary out;
    out.ci95 = {quantile_sorted(stats, 0.025), quantile_sorted(stats, 0.975)};
    const double mu = mean(stats);
    double s = 0.0;
    for (double v : stats) s += (v - mu) * (v - mu);
    out.se = std::sqrt(s / static_cast<double>(stats.size() - 1));
    return out;
}

// two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|
inline double ks_statistic(std::span<const double> a, std::span<const double> b) {
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        if (sa[i] <= sb[j]) {
            ++i;
        } else {
            ++j;
        }
        const double fa = static_cast<double>(i) / static_cast<double>(sa.size());
        const double fb = static_cast<double>(j) / static_cast<double>(sb.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

}  // namespace kostlan
