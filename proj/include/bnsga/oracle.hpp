#pragma once

/// @file oracle.hpp
/// @brief Pareto-front coverage tracking and the incomparable-set bound S.

#include "benchmarks.hpp"
#include "core.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace bnsga {

/// Tracks which Pareto-front values have been reached.
///
/// `covered` only grows: it records every front value seen in any population
/// passed to update(). `present` is the number of front values held by the
/// most recent population, which is what run termination looks at.
class CoverageTracker {
public:
    explicit CoverageTracker(const ParetoFront& target)
        : target_(&target), covered_(target.size(), 0), seen_now_(target.size(), 0)
    {
    }

    [[nodiscard]] const ParetoFront& target() const noexcept { return *target_; }

    /// Number of front values ever covered.
    [[nodiscard]] std::size_t covered_count() const noexcept { return covered_count_; }
    /// Number of front values present in the last population.
    [[nodiscard]] std::size_t present_count() const noexcept { return present_count_; }

    /// covered == target
    [[nodiscard]] bool complete() const noexcept { return covered_count_ == target_->size(); }
    /// The last population alone covers the whole front.
    [[nodiscard]] bool population_covers() const noexcept { return present_count_ == target_->size(); }

    [[nodiscard]] double present_fraction() const noexcept
    {
        return target_->size() == 0 ? 1.0
                                    : static_cast<double>(present_count_) / static_cast<double>(target_->size());
    }

    [[nodiscard]] bool is_covered(const ObjectiveVector& v) const
    {
        const auto i = target_->index_of(v);
        return i.has_value() && covered_[*i] != 0;
    }

    /// Covered values, in the front's sorted order.
    [[nodiscard]] std::vector<ObjectiveVector> covered_values() const
    {
        std::vector<ObjectiveVector> out;
        for (std::size_t i = 0; i < covered_.size(); ++i) {
            if (covered_[i] != 0) {
                out.push_back(target_->values()[i]);
            }
        }
        return out;
    }

    void update(std::span<const Individual> population)
    {
        std::fill(seen_now_.begin(), seen_now_.end(), 0);
        present_count_ = 0;
        for (const auto& x : population) {
            if (!x.objective.empty() && target_->size() > 0) {
                detail::require(x.objective.size() == target_->values().front().size(),
                                "CoverageTracker: objective count differs from the front");
            }
            const auto i = target_->index_of(x.objective);
            if (!i) {
                continue;
            }
            if (seen_now_[*i] == 0) {
                seen_now_[*i] = 1;
                ++present_count_;
            }
            if (covered_[*i] == 0) {
                covered_[*i] = 1;
                ++covered_count_;
            }
        }
    }

private:
    const ParetoFront* target_;
    std::vector<char> covered_;
    std::vector<char> seen_now_;
    std::size_t covered_count_ = 0;
    std::size_t present_count_ = 0;
};

/// Returns a copy of `tracker` updated with `population`.
[[nodiscard]] inline CoverageTracker update_coverage(CoverageTracker tracker, std::span<const Individual> population)
{
    tracker.update(population);
    return tracker;
}

namespace detail {

[[nodiscard]] inline std::uint64_t checked_power(std::uint64_t base, std::size_t exponent)
{
    std::uint64_t result = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        detail::require(result <= std::numeric_limits<std::uint64_t>::max() / base,
                        "incomparable_set_bound: value overflows 64 bits");
        result *= base;
    }
    return result;
}

} // namespace detail

/// Upper bound S on the size of any set of pairwise incomparable solutions.
///
/// Block versions: (n'+1)^(m/2) for OneMinMax and OneJumpZeroJump,
/// (n'+1)^(m-1) for LeadingOnesTrailingZeros. The bi-objective and the
/// 3-objective cases use the front size M.
[[nodiscard]] inline std::uint64_t incomparable_set_bound(const Benchmark& benchmark)
{
    const auto& spec = benchmark.spec();
    if (spec.m <= 3) {
        return pareto_front(benchmark).size();
    }
    const std::uint64_t base = benchmark.block_length() + 1;
    if (spec.family == Family::LeadingOnesTrailingZeros) {
        return detail::checked_power(base, spec.m - 1);
    }
    return detail::checked_power(base, spec.m / 2);
}

/// Smallest population size covered by the many-objective guarantee: S + 4n + 2m.
[[nodiscard]] inline std::uint64_t minimum_population_size(const Benchmark& benchmark)
{
    return incomparable_set_bound(benchmark) + 4 * benchmark.n() + 2 * benchmark.m();
}

} // namespace bnsga
