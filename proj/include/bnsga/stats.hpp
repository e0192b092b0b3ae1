#pragma once

/// @file stats.hpp
/// @brief One-sided Mann-Whitney U test and simple descriptive statistics.

#include "core.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace bnsga {

/// Direction of the one-sided alternative hypothesis.
enum class Alternative {
    Less,    ///< values in `a` tend to be smaller than values in `b`
    Greater, ///< values in `a` tend to be larger than values in `b`
};

enum class PValueMethod { Exact, NormalApprox };

[[nodiscard]] inline std::string to_string(PValueMethod method)
{
    return method == PValueMethod::Exact ? "exact" : "normal";
}

struct StatResult {
    std::string group_a;
    std::string group_b;
    double u_statistic = 0.0; ///< U of sample a: rank sum of a minus |a|(|a|+1)/2
    double p_value = 1.0;
    PValueMethod method = PValueMethod::Exact;
};

/// Exact p-values are used up to this combined sample size, and only without ties.
inline constexpr std::size_t kExactMannWhitneyMaxTotal = 20;

namespace detail {

/// Midranks (1-based) of the pooled sample; also returns sum over tie groups of t^3 - t.
inline std::vector<double> midranks(std::span<const double> pooled, double& tie_term)
{
    std::vector<std::size_t> order(pooled.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
    std::vector<double> ranks(pooled.size());
    tie_term = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) {
            ++j;
        }
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) {
            ranks[order[t]] = rank;
        }
        const auto t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }
    return ranks;
}

/// counts[u] = number of arrangements of n1 + n2 distinct ranks with U = u for the first sample.
inline std::vector<double> mann_whitney_null_counts(std::size_t n1, std::size_t n2)
{
    // table[a][b] is the count vector for sample sizes (a, b); built with
    // f(a, b, u) = f(a - 1, b, u - b) + f(a, b - 1, u).
    std::vector<std::vector<std::vector<double>>> table(n1 + 1, std::vector<std::vector<double>>(n2 + 1));
    for (std::size_t a = 0; a <= n1; ++a) {
        for (std::size_t b = 0; b <= n2; ++b) {
            auto& counts = table[a][b];
            counts.assign(a * b + 1, 0.0);
            if (a == 0 || b == 0) {
                counts[0] = 1.0;
                continue;
            }
            const auto& drop_a = table[a - 1][b];
            const auto& drop_b = table[a][b - 1];
            for (std::size_t u = 0; u < drop_b.size(); ++u) {
                counts[u] += drop_b[u];
            }
            for (std::size_t u = 0; u < drop_a.size(); ++u) {
                counts[u + b] += drop_a[u];
            }
        }
    }
    return table[n1][n2];
}

[[nodiscard]] inline double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

} // namespace detail

/// One-sided Mann-Whitney U test of `a` against `b`.
///
/// Tie-free samples with |a| + |b| <= 20 get the exact null distribution.
/// Otherwise the normal approximation is used with the tie-corrected variance
/// and a continuity correction of 1/2 towards the mean.
[[nodiscard]] inline StatResult mann_whitney_one_sided(std::span<const double> a, std::span<const double> b,
                                                       Alternative alternative = Alternative::Less)
{
    detail::require(!a.empty() && !b.empty(), "mann_whitney_one_sided: samples must not be empty");
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    double tie_term = 0.0;
    const auto ranks = detail::midranks(pooled, tie_term);
    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    const double rank_sum = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);

    StatResult result;
    result.u_statistic = rank_sum - n1 * (n1 + 1.0) / 2.0;

    if (pooled.size() <= kExactMannWhitneyMaxTotal && tie_term == 0.0) {
        const auto counts = detail::mann_whitney_null_counts(a.size(), b.size());
        const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
        const auto u = static_cast<std::size_t>(std::llround(result.u_statistic));
        double tail = 0.0;
        if (alternative == Alternative::Less) {
            for (std::size_t v = 0; v <= u; ++v) {
                tail += counts[v];
            }
        } else {
            for (std::size_t v = u; v < counts.size(); ++v) {
                tail += counts[v];
            }
        }
        result.p_value = tail / total;
        result.method = PValueMethod::Exact;
        return result;
    }

    result.method = PValueMethod::NormalApprox;
    const double total = n1 + n2;
    const double mean = n1 * n2 / 2.0;
    const double variance = n1 * n2 / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
    if (variance <= 0.0) {
        result.p_value = 1.0;
        return result;
    }
    const double sd = std::sqrt(variance);
    if (alternative == Alternative::Less) {
        result.p_value = detail::standard_normal_cdf((result.u_statistic - mean + 0.5) / sd);
    } else {
        result.p_value = 1.0 - detail::standard_normal_cdf((result.u_statistic - mean - 0.5) / sd);
    }
    result.p_value = std::clamp(result.p_value, 0.0, 1.0);
    return result;
}

struct Descriptive {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0; ///< sample standard deviation (n - 1), 0 for a single value
};

/// Mean, median and sample standard deviation of integer observations.
/// The mean is the exact integer sum divided once by the count.
[[nodiscard]] inline Descriptive describe(std::span<const std::uint64_t> values)
{
    Descriptive d;
    d.count = values.size();
    if (values.empty()) {
        return d;
    }
    std::uint64_t sum = 0;
    for (const auto v : values) {
        sum += v;
    }
    d.mean = static_cast<double>(sum) / static_cast<double>(values.size());

    std::vector<std::uint64_t> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    d.median = sorted.size() % 2 == 1
                   ? static_cast<double>(sorted[mid])
                   : (static_cast<double>(sorted[mid - 1]) + static_cast<double>(sorted[mid])) / 2.0;

    if (values.size() > 1) {
        double squares = 0.0;
        for (const auto v : values) {
            const double diff = static_cast<double>(v) - d.mean;
            squares += diff * diff;
        }
        d.stddev = std::sqrt(squares / static_cast<double>(values.size() - 1));
    }
    return d;
}

} // namespace bnsga
