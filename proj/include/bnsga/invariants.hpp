#pragma once

/// @file invariants.hpp
/// @brief Runtime checks of the structural guarantees of survivor selection.
///
/// All checks are pure functions of one generation's SelectionAudit and
/// ranked population; LemmaMonitor bundles them into a step observer that
/// counts violations instead of aborting.

#include "core.hpp"
#include "nsga2.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace bnsga {

/// At most 2m members per objective value of the critical front have positive
/// crowding distance. Returns the number of values breaking the bound.
[[nodiscard]] inline std::size_t count_positive_cd_violations(const SelectionAudit& audit, std::size_t m)
{
    return static_cast<std::size_t>(std::count_if(audit.values.begin(), audit.values.end(),
                                                  [&](const ValueAudit& v) { return v.positive_cd > 2 * m; }));
}

/// Minimum number of members with a given value that balanced selection keeps:
/// min(max(floor(C/S) - 2m, 0), count), with C slots and S distinct values.
[[nodiscard]] inline std::size_t retention_floor(std::size_t slots, std::size_t distinct_values, std::size_t m,
                                                 std::size_t count)
{
    const std::size_t per_value = distinct_values == 0 ? 0 : slots / distinct_values;
    const std::size_t quota = per_value > 2 * m ? per_value - 2 * m : 0;
    return std::min(quota, count);
}

/// Number of critical-front values kept fewer times than retention_floor.
[[nodiscard]] inline std::size_t count_retention_violations(const SelectionAudit& audit, std::size_t m)
{
    const std::size_t distinct = audit.values.size();
    return static_cast<std::size_t>(std::count_if(audit.values.begin(), audit.values.end(), [&](const ValueAudit& v) {
        return v.kept < retention_floor(audit.slots, distinct, m, v.in_front);
    }));
}

/// Number of objective values of the first front that have no survivor in `selected`.
[[nodiscard]] inline std::size_t count_lost_first_front_values(const RankedPopulation& ranked,
                                                               std::span<const std::size_t> selected)
{
    std::unordered_set<std::size_t> kept;
    for (const auto i : selected) {
        kept.insert(ranked.value_id[i]);
    }
    std::unordered_set<std::size_t> lost;
    for (const auto i : ranked.fronts.front()) {
        if (!kept.contains(ranked.value_id[i])) {
            lost.insert(ranked.value_id[i]);
        }
    }
    return lost.size();
}

/// Largest value of objective `j` over the given members.
[[nodiscard]] inline ObjectiveValue max_objective(const RankedPopulation& ranked, std::span<const std::size_t> members,
                                                  std::size_t j)
{
    ObjectiveValue best = std::numeric_limits<ObjectiveValue>::min();
    for (const auto i : members) {
        best = std::max(best, ranked.members[i].objective[j]);
    }
    return best;
}

/// Which checks a LemmaMonitor applies each generation.
struct LemmaChecks {
    bool positive_cd_bound = true;
    bool retention_bound = true;
    bool first_front_survival = true;
    /// max of objective 0 over the population never decreases (LeadingOnes part of LOTZ).
    bool leading_ones_monotone = false;
};

struct LemmaViolations {
    std::size_t generations = 0;
    std::size_t positive_cd = 0;
    std::size_t retention = 0;
    std::size_t survival = 0;
    std::size_t monotonicity = 0;

    [[nodiscard]] std::size_t total() const noexcept { return positive_cd + retention + survival + monotonicity; }

    LemmaViolations& operator+=(const LemmaViolations& other) noexcept
    {
        generations += other.generations;
        positive_cd += other.positive_cd;
        retention += other.retention;
        survival += other.survival;
        monotonicity += other.monotonicity;
        return *this;
    }
};

/// Step observer that evaluates the enabled checks. Requires StepOptions::audit.
class LemmaMonitor {
public:
    LemmaMonitor(std::size_t m, LemmaChecks checks) : m_(m), checks_(checks) {}

    void operator()(const RankedPopulation& ranked, std::span<const std::size_t> selected, const SelectionAudit& audit)
    {
        ++violations_.generations;
        if (checks_.positive_cd_bound) {
            violations_.positive_cd += count_positive_cd_violations(audit, m_);
        }
        if (checks_.retention_bound) {
            violations_.retention += count_retention_violations(audit, m_);
        }
        if (checks_.first_front_survival) {
            violations_.survival += count_lost_first_front_values(ranked, selected);
        }
        if (checks_.leading_ones_monotone) {
            // The parents occupy the first N members of the combined population.
            std::vector<std::size_t> parents(selected.size());
            std::iota(parents.begin(), parents.end(), std::size_t{0});
            const auto before = max_objective(ranked, parents, 0);
            const auto after = max_objective(ranked, selected, 0);
            violations_.monotonicity += static_cast<std::size_t>(after < before);
        }
    }

    [[nodiscard]] const LemmaViolations& violations() const noexcept { return violations_; }

private:
    std::size_t m_;
    LemmaChecks checks_;
    LemmaViolations violations_;
};

} // namespace bnsga
