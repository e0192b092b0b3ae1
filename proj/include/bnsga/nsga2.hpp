#pragma once

/// @file nsga2.hpp
/// @brief One generation of the NSGA-II with a pluggable final tie-breaker.
///
/// Selection proceeds in three stages:
///   1. non-dominated rank (fronts F_1, F_2, ... taken whole until the
///      critical rank j*),
///   2. crowding distance inside F_{j*} (groups C_1, C_2, ... of equal
///      distance, taken whole until the critical index c*),
///   3. a tie-breaker filling the last `s` slots from C_{c*}: uniform
///      (classic) or per-objective-value quotas (balanced).
///
/// Crowding distances are exact rationals so that stage 2 groups by true
/// equality.
///
/// Randomness consumption per generation, in order:
///   - per offspring: one parent-index draw, then n mutation draws;
///   - then the tie-breaker's draws (none when s == 0 or s == |C_{c*}|).

#include "core.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bnsga {

// ---------------------------------------------------------------------------
// Exact crowding distance
// ---------------------------------------------------------------------------

/// Non-negative rational or +infinity.
class RationalCD {
public:
    constexpr RationalCD() = default;

    static constexpr RationalCD infinity() noexcept
    {
        RationalCD cd;
        cd.infinite_ = true;
        return cd;
    }

    static RationalCD fraction(std::uint64_t numerator, std::uint64_t denominator)
    {
        detail::require(denominator > 0, "RationalCD: denominator must be positive");
        const std::uint64_t g = std::gcd(numerator, denominator);
        RationalCD cd;
        cd.numerator_ = numerator / g;
        cd.denominator_ = denominator / g;
        if (cd.numerator_ == 0) {
            cd.denominator_ = 1;
        }
        return cd;
    }

    [[nodiscard]] constexpr bool is_infinite() const noexcept { return infinite_; }
    [[nodiscard]] constexpr bool is_positive() const noexcept { return infinite_ || numerator_ > 0; }
    [[nodiscard]] constexpr std::uint64_t numerator() const noexcept { return numerator_; }
    [[nodiscard]] constexpr std::uint64_t denominator() const noexcept { return denominator_; }

    [[nodiscard]] double to_double() const noexcept
    {
        return infinite_ ? std::numeric_limits<double>::infinity()
                         : static_cast<double>(numerator_) / static_cast<double>(denominator_);
    }

    friend constexpr std::strong_ordering operator<=>(const RationalCD& a, const RationalCD& b) noexcept
    {
        if (a.infinite_ || b.infinite_) {
            return static_cast<int>(a.infinite_) <=> static_cast<int>(b.infinite_);
        }
        using u128 = unsigned __int128;
        const u128 lhs = static_cast<u128>(a.numerator_) * b.denominator_;
        const u128 rhs = static_cast<u128>(b.numerator_) * a.denominator_;
        return lhs <=> rhs;
    }

    friend constexpr bool operator==(const RationalCD& a, const RationalCD& b) noexcept
    {
        return (a <=> b) == std::strong_ordering::equal;
    }

    [[nodiscard]] std::string to_string() const
    {
        if (infinite_) {
            return "inf";
        }
        if (denominator_ == 1) {
            return std::to_string(numerator_);
        }
        return std::to_string(numerator_) + "/" + std::to_string(denominator_);
    }

private:
    bool infinite_ = false;
    std::uint64_t numerator_ = 0;
    std::uint64_t denominator_ = 1;
};

/// Crowding distance of every element of `front`, in input order.
///
/// Per objective the elements are ordered by (value, input position). The
/// first and last element get +inf; an interior element gets the gap between
/// its two neighbours divided by the objective's range, or 0 when the range
/// is 0. All contributions are summed over the least common multiple of the
/// ranges, so the result is exact.
template <typename Range, typename Projection>
[[nodiscard]] std::vector<RationalCD> crowding_distance(const Range& front, Projection objective_of)
{
    const std::size_t a = std::size(front);
    std::vector<RationalCD> result(a);
    if (a == 0) {
        return result;
    }
    std::vector<const ObjectiveVector*> values;
    values.reserve(a);
    for (const auto& element : front) {
        values.push_back(&objective_of(element));
    }
    const std::size_t m = values.front()->size();

    std::vector<std::size_t> order(a);
    std::vector<bool> infinite(a, false);
    std::vector<std::uint64_t> numerator(a, 0);
    unsigned __int128 common = 1;

    // First pass: orders and the common denominator.
    std::vector<std::vector<std::size_t>> orders(m);
    std::vector<std::uint64_t> ranges(m, 0);
    for (std::size_t j = 0; j < m; ++j) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t lhs, std::size_t rhs) { return (*values[lhs])[j] < (*values[rhs])[j]; });
        ranges[j] = static_cast<std::uint64_t>((*values[order.back()])[j] - (*values[order.front()])[j]);
        if (ranges[j] > 0) {
            common = std::lcm(static_cast<std::uint64_t>(common), ranges[j]);
            detail::require(common <= (std::uint64_t{1} << 40U), "crowding_distance: denominator overflow");
        }
        orders[j] = order;
    }
    const auto denominator = static_cast<std::uint64_t>(common);

    for (std::size_t j = 0; j < m; ++j) {
        const auto& sorted = orders[j];
        infinite[sorted.front()] = true;
        infinite[sorted.back()] = true;
        if (ranges[j] == 0) {
            continue;
        }
        const std::uint64_t scale = denominator / ranges[j];
        for (std::size_t i = 1; i + 1 < a; ++i) {
            const auto gap = (*values[sorted[i + 1]])[j] - (*values[sorted[i - 1]])[j];
            numerator[sorted[i]] += static_cast<std::uint64_t>(gap) * scale;
        }
    }

    for (std::size_t i = 0; i < a; ++i) {
        result[i] = infinite[i] ? RationalCD::infinity() : RationalCD::fraction(numerator[i], denominator);
    }
    return result;
}

[[nodiscard]] inline std::vector<RationalCD> crowding_distance(std::span<const Individual> front)
{
    return crowding_distance(front, [](const Individual& x) -> const ObjectiveVector& { return x.objective; });
}

[[nodiscard]] inline std::vector<RationalCD> crowding_distance(std::span<const ObjectiveVector> front)
{
    return crowding_distance(front, [](const ObjectiveVector& v) -> const ObjectiveVector& { return v; });
}

/// Partition of positions [0, cds.size()) into groups of equal distance,
/// ordered by strictly decreasing distance. Positions ascend inside a group.
[[nodiscard]] inline std::vector<std::vector<std::size_t>> crowding_groups(std::span<const RationalCD> cds)
{
    std::vector<std::size_t> order(cds.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cds[a] > cds[b]; });
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i == 0 || cds[order[i]] != cds[order[i - 1]]) {
            groups.emplace_back();
        }
        groups.back().push_back(order[i]);
    }
    return groups;
}

// ---------------------------------------------------------------------------
// Non-dominated sorting
// ---------------------------------------------------------------------------

/// Combined population annotated with non-dominated ranks.
struct RankedPopulation {
    std::vector<Individual> members;
    /// rank[i] is the 1-based rank of members[i].
    std::vector<std::size_t> rank;
    /// fronts[j] lists the member indices of rank j+1, ascending.
    std::vector<std::vector<std::size_t>> fronts;
    /// Distinct objective vectors in order of first appearance.
    std::vector<ObjectiveVector> distinct_values;
    /// value_id[i] indexes distinct_values for members[i].
    std::vector<std::size_t> value_id;
    /// Crowding distance, set only for members of the front it was computed on.
    std::vector<std::optional<RationalCD>> crowding;

    [[nodiscard]] std::vector<std::size_t> front_sizes() const
    {
        std::vector<std::size_t> sizes;
        sizes.reserve(fronts.size());
        for (const auto& f : fronts) {
            sizes.push_back(f.size());
        }
        return sizes;
    }
};

/// Ranks of the given objective vectors (1-based).
///
/// Equal vectors share a rank, so the peeling runs over distinct values only:
/// O(m D^2) for D distinct vectors.
[[nodiscard]] inline std::vector<std::size_t> nondominated_ranks(std::span<const ObjectiveVector> values,
                                                                 std::vector<ObjectiveVector>* distinct_out = nullptr,
                                                                 std::vector<std::size_t>* value_id_out = nullptr)
{
    std::unordered_map<ObjectiveVector, std::size_t, ObjectiveVectorHash> ids;
    ids.reserve(values.size());
    std::vector<ObjectiveVector> distinct;
    std::vector<std::size_t> value_id(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto [it, inserted] = ids.try_emplace(values[i], distinct.size());
        if (inserted) {
            distinct.push_back(values[i]);
        }
        value_id[i] = it->second;
    }

    const std::size_t d = distinct.size();
    std::vector<std::size_t> dominated_by_count(d, 0);
    std::vector<std::vector<std::size_t>> dominates(d);
    for (std::size_t p = 0; p < d; ++p) {
        for (std::size_t q = p + 1; q < d; ++q) {
            const auto relation = compare(distinct[p], distinct[q]);
            if (relation == DominationRelation::StrictlyDominates) {
                dominates[p].push_back(q);
                ++dominated_by_count[q];
            } else if (relation == DominationRelation::IsStrictlyDominated) {
                dominates[q].push_back(p);
                ++dominated_by_count[p];
            }
        }
    }

    std::vector<std::size_t> value_rank(d, 0);
    std::vector<std::size_t> current;
    for (std::size_t p = 0; p < d; ++p) {
        if (dominated_by_count[p] == 0) {
            current.push_back(p);
        }
    }
    std::size_t rank = 1;
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (const auto p : current) {
            value_rank[p] = rank;
            for (const auto q : dominates[p]) {
                if (--dominated_by_count[q] == 0) {
                    next.push_back(q);
                }
            }
        }
        current = std::move(next);
        ++rank;
    }

    std::vector<std::size_t> ranks(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        ranks[i] = value_rank[value_id[i]];
    }
    if (distinct_out != nullptr) {
        *distinct_out = std::move(distinct);
    }
    if (value_id_out != nullptr) {
        *value_id_out = std::move(value_id);
    }
    return ranks;
}

/// Partitions `combined` into fronts of equal non-dominated rank.
[[nodiscard]] inline RankedPopulation nondominated_sort(std::vector<Individual> combined)
{
    detail::require(!combined.empty(), "nondominated_sort: population must not be empty");
    RankedPopulation ranked;
    std::vector<ObjectiveVector> values;
    values.reserve(combined.size());
    for (const auto& x : combined) {
        values.push_back(x.objective);
    }
    ranked.rank = nondominated_ranks(values, &ranked.distinct_values, &ranked.value_id);
    ranked.members = std::move(combined);
    const std::size_t r = *std::max_element(ranked.rank.begin(), ranked.rank.end());
    ranked.fronts.resize(r);
    for (std::size_t i = 0; i < ranked.members.size(); ++i) {
        ranked.fronts[ranked.rank[i] - 1].push_back(i);
    }
    ranked.crowding.assign(ranked.members.size(), std::nullopt);
    return ranked;
}

// ---------------------------------------------------------------------------
// Critical indices
// ---------------------------------------------------------------------------

/// Smallest 1-based index c with sizes[0] + ... + sizes[c-1] >= target.
[[nodiscard]] inline std::size_t critical_index(std::span<const std::size_t> sizes, std::size_t target)
{
    detail::require(target >= 1, "critical_index: target must be at least 1");
    std::size_t cumulative = 0;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        cumulative += sizes[c];
        if (cumulative >= target) {
            return c + 1;
        }
    }
    throw ContractViolation("critical_index: target exceeds the total size");
}

/// Critical rank j* of `ranked` for population size N.
[[nodiscard]] inline std::size_t critical_rank(const RankedPopulation& ranked, std::size_t population_size)
{
    detail::require(ranked.members.size() >= population_size, "critical_rank: fewer members than N");
    const auto sizes = ranked.front_sizes();
    return critical_index(sizes, population_size);
}

/// Critical crowding-distance index c* for `slots` remaining places.
[[nodiscard]] inline std::size_t critical_cd_index(const std::vector<std::vector<std::size_t>>& groups,
                                                   std::size_t slots)
{
    std::vector<std::size_t> sizes;
    sizes.reserve(groups.size());
    for (const auto& g : groups) {
        sizes.push_back(g.size());
    }
    return critical_index(sizes, slots);
}

// ---------------------------------------------------------------------------
// Tie-breakers
// ---------------------------------------------------------------------------

enum class TieBreak { Classic, Balanced };

[[nodiscard]] inline std::string_view to_string(TieBreak t) noexcept
{
    return t == TieBreak::Classic ? "classic" : "balanced";
}

[[nodiscard]] inline TieBreak parse_tie_break(std::string_view name)
{
    if (name == "classic") {
        return TieBreak::Classic;
    }
    if (name == "balanced") {
        return TieBreak::Balanced;
    }
    throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected classic or balanced)");
}

namespace detail {

/// Moves a uniform s-subset of `items` to its front (partial Fisher-Yates, s draws).
inline void partial_shuffle(std::vector<std::size_t>& items, std::size_t s, RngStream& rng)
{
    for (std::size_t i = 0; i < s; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(items.size() - i));
        std::swap(items[i], items[j]);
    }
}

} // namespace detail

/// Uniform sample of `slots` distinct positions out of [0, group_size).
/// A full take returns every position without consuming randomness.
[[nodiscard]] inline std::vector<std::size_t> select_random(std::size_t group_size, std::size_t slots, RngStream& rng)
{
    detail::require(slots <= group_size, "select_random: more slots than candidates");
    std::vector<std::size_t> positions(group_size);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    if (slots == group_size) {
        return positions;
    }
    detail::partial_shuffle(positions, slots, rng);
    positions.resize(slots);
    return positions;
}

/// Balanced sample of `slots` positions out of a group whose i-th element has
/// objective-value identifier `value_ids[i]`.
///
/// With a distinct values present, each value contributes
/// min(count, floor(slots / a)) uniformly chosen elements. Value groups are
/// visited in order of first appearance. Any slots still open are filled by a
/// uniform sample from all elements not yet taken.
[[nodiscard]] inline std::vector<std::size_t> select_balanced(std::span<const std::size_t> value_ids,
                                                              std::size_t slots, RngStream& rng)
{
    const std::size_t size = value_ids.size();
    detail::require(slots <= size, "select_balanced: more slots than candidates");
    if (slots == size) {
        std::vector<std::size_t> all(size);
        std::iota(all.begin(), all.end(), std::size_t{0});
        return all;
    }
    std::vector<std::size_t> selected;
    selected.reserve(slots);
    if (slots == 0) {
        return selected;
    }

    std::unordered_map<std::size_t, std::size_t> group_of;
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < size; ++i) {
        const auto [it, inserted] = group_of.try_emplace(value_ids[i], groups.size());
        if (inserted) {
            groups.emplace_back();
        }
        groups[it->second].push_back(i);
    }

    const std::size_t quota = slots / groups.size();
    std::vector<std::size_t> leftovers;
    for (auto& group : groups) {
        const std::size_t take = std::min(group.size(), quota);
        detail::partial_shuffle(group, take, rng);
        selected.insert(selected.end(), group.begin(), group.begin() + static_cast<std::ptrdiff_t>(take));
        leftovers.insert(leftovers.end(), group.begin() + static_cast<std::ptrdiff_t>(take), group.end());
    }
    const std::size_t missing = slots - selected.size();
    detail::partial_shuffle(leftovers, missing, rng);
    selected.insert(selected.end(), leftovers.begin(), leftovers.begin() + static_cast<std::ptrdiff_t>(missing));
    return selected;
}

/// Convenience overload grouping by the individuals' objective vectors.
[[nodiscard]] inline std::vector<std::size_t> select_balanced(std::span<const Individual> group, std::size_t slots,
                                                              RngStream& rng)
{
    std::unordered_map<ObjectiveVector, std::size_t, ObjectiveVectorHash> ids;
    std::vector<std::size_t> value_ids;
    value_ids.reserve(group.size());
    for (const auto& x : group) {
        value_ids.push_back(ids.try_emplace(x.objective, ids.size()).first->second);
    }
    return select_balanced(value_ids, slots, rng);
}

// ---------------------------------------------------------------------------
// One generation
// ---------------------------------------------------------------------------

/// Per-value bookkeeping of the critical front.
struct ValueAudit {
    ObjectiveVector value;
    std::size_t in_front = 0;     ///< members of F_{j*} with this value
    std::size_t positive_cd = 0;  ///< of those, how many have crowding distance > 0
    std::size_t kept = 0;         ///< of those, how many entered the next population
};

/// How the last generation's survivors were chosen.
struct SelectionAudit {
    std::size_t critical_rank = 0;        ///< j*
    std::size_t earlier_fronts = 0;       ///< |F_1 ∪ ... ∪ F_{j*-1}|
    std::size_t critical_front_size = 0;  ///< |F_{j*}|
    std::size_t slots = 0;                ///< places filled from F_{j*}
    std::size_t cd_index = 0;             ///< c*
    std::size_t tie_group_size = 0;       ///< |C_{c*}|
    std::size_t tie_slots = 0;            ///< s
    std::size_t tie_group_values = 0;     ///< distinct values in C_{c*}
    /// Filled only when StepOptions::audit is set; one entry per value in F_{j*}.
    std::vector<ValueAudit> values;
};

struct SelectionOutcome {
    std::vector<Individual> next_population;
    SelectionAudit audit;
};

struct StepOptions {
    bool audit = false;
};

/// Called after selection, before the survivors are moved out of `combined`.
struct NoStepObserver {
    void operator()(const RankedPopulation&, std::span<const std::size_t>, const SelectionAudit&) const noexcept {}
};

/// N uniformly random individuals.
template <typename Evaluate>
[[nodiscard]] std::vector<Individual> initial_population(std::size_t n, std::size_t population_size,
                                                         const Evaluate& evaluate, RngStream& rng)
{
    detail::require(population_size >= 1, "initial_population: N must be at least 1");
    std::vector<Individual> population;
    population.reserve(population_size);
    for (std::size_t i = 0; i < population_size; ++i) {
        population.push_back(make_individual(uniform_bitstring(n, rng), evaluate));
    }
    return population;
}

/// Selects N survivors out of an already ranked combined population.
/// Returns indices into `ranked.members`.
inline std::vector<std::size_t> select_survivors(RankedPopulation& ranked, std::size_t population_size,
                                                 TieBreak tie_break, RngStream& rng, SelectionAudit& audit,
                                                 bool collect_values)
{
    const std::size_t j_star = critical_rank(ranked, population_size);
    std::vector<std::size_t> selected;
    selected.reserve(population_size);
    for (std::size_t j = 0; j + 1 < j_star; ++j) {
        selected.insert(selected.end(), ranked.fronts[j].begin(), ranked.fronts[j].end());
    }
    const auto& front = ranked.fronts[j_star - 1];
    const std::size_t slots = population_size - selected.size();

    audit = SelectionAudit{};
    audit.critical_rank = j_star;
    audit.earlier_fronts = selected.size();
    audit.critical_front_size = front.size();
    audit.slots = slots;

    const auto cds = crowding_distance(front, [&](std::size_t i) -> const ObjectiveVector& {
        return ranked.members[i].objective;
    });
    for (std::size_t p = 0; p < front.size(); ++p) {
        ranked.crowding[front[p]] = cds[p];
    }
    const auto groups = crowding_groups(cds);
    const std::size_t c_star = critical_cd_index(groups, slots);
    for (std::size_t c = 0; c + 1 < c_star; ++c) {
        for (const auto p : groups[c]) {
            selected.push_back(front[p]);
        }
    }
    const auto& tie_group = groups[c_star - 1];
    const std::size_t s = population_size - selected.size();

    std::vector<std::size_t> tie_value_ids;
    tie_value_ids.reserve(tie_group.size());
    for (const auto p : tie_group) {
        tie_value_ids.push_back(ranked.value_id[front[p]]);
    }
    const auto chosen = tie_break == TieBreak::Classic ? select_random(tie_group.size(), s, rng)
                                                       : select_balanced(tie_value_ids, s, rng);
    for (const auto q : chosen) {
        selected.push_back(front[tie_group[q]]);
    }

    audit.cd_index = c_star;
    audit.tie_group_size = tie_group.size();
    audit.tie_slots = s;
    {
        std::vector<std::size_t> ids = tie_value_ids;
        std::sort(ids.begin(), ids.end());
        audit.tie_group_values = static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
    }

    if (collect_values) {
        std::unordered_map<std::size_t, std::size_t> slot_of_value;
        for (std::size_t p = 0; p < front.size(); ++p) {
            const std::size_t id = ranked.value_id[front[p]];
            const auto [it, inserted] = slot_of_value.try_emplace(id, audit.values.size());
            if (inserted) {
                audit.values.push_back(ValueAudit{ranked.distinct_values[id], 0, 0, 0});
            }
            auto& entry = audit.values[it->second];
            ++entry.in_front;
            entry.positive_cd += static_cast<std::size_t>(cds[p].is_positive());
        }
        for (std::size_t i = audit.earlier_fronts; i < selected.size(); ++i) {
            const std::size_t id = ranked.value_id[selected[i]];
            ++audit.values[slot_of_value.at(id)].kept;
        }
    }
    return selected;
}

/// One generation: N offspring by uniform parent choice and standard bit
/// mutation, then survivor selection on parents plus offspring.
template <typename Evaluate, typename Observer = NoStepObserver>
[[nodiscard]] SelectionOutcome step(std::vector<Individual> population, const Evaluate& evaluate, TieBreak tie_break,
                                    RngStream& rng, StepOptions options = {}, Observer&& observer = {})
{
    const std::size_t population_size = population.size();
    detail::require(population_size >= 1, "step: population must not be empty");

    std::vector<Individual> combined = std::move(population);
    combined.reserve(2 * population_size);
    for (std::size_t i = 0; i < population_size; ++i) {
        const auto parent = static_cast<std::size_t>(rng.below(population_size));
        combined.push_back(make_individual(mutate(combined[parent].genotype, rng), evaluate));
    }

    RankedPopulation ranked = nondominated_sort(std::move(combined));
    SelectionOutcome outcome;
    const auto selected = select_survivors(ranked, population_size, tie_break, rng, outcome.audit, options.audit);
    observer(std::as_const(ranked), std::span<const std::size_t>(selected), std::as_const(outcome.audit));

    outcome.next_population.reserve(population_size);
    for (const auto i : selected) {
        outcome.next_population.push_back(std::move(ranked.members[i]));
    }
    return outcome;
}

} // namespace bnsga
