#pragma once

/// @file benchmarks.hpp
/// @brief OneMinMax, LeadingOnesTrailingZeros and OneJumpZeroJump, bi-objective,
/// block-wise m-objective, and the 3-objective OneMinMax.
///
/// A Benchmark is validated once at construction; `evaluate` does no checking
/// beyond the genotype length.

#include "core.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bnsga {

enum class Family { OneMinMax, LeadingOnesTrailingZeros, OneJumpZeroJump };

/// Parameters of one benchmark instance.
struct BenchmarkSpec {
    Family family = Family::OneMinMax;
    std::size_t n = 0;
    std::size_t m = 2;
    std::size_t k = 0; ///< gap width, OneJumpZeroJump only

    friend bool operator==(const BenchmarkSpec&, const BenchmarkSpec&) = default;
};

/// Exact Pareto front: lexicographically sorted values plus an index for O(1) membership.
class ParetoFront {
public:
    ParetoFront() = default;

    explicit ParetoFront(std::vector<ObjectiveVector> values) : values_(std::move(values))
    {
        std::sort(values_.begin(), values_.end());
        values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
        index_.reserve(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i) {
            index_.emplace(values_[i], i);
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] const std::vector<ObjectiveVector>& values() const noexcept { return values_; }
    [[nodiscard]] bool contains(const ObjectiveVector& v) const { return index_.contains(v); }

    /// Position of `v` in values(), or nullopt when v is not on the front.
    [[nodiscard]] std::optional<std::size_t> index_of(const ObjectiveVector& v) const
    {
        const auto it = index_.find(v);
        if (it == index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    friend bool operator==(const ParetoFront& a, const ParetoFront& b) { return a.values_ == b.values_; }

private:
    std::vector<ObjectiveVector> values_;
    std::unordered_map<ObjectiveVector, std::size_t, ObjectiveVectorHash> index_;
};

namespace detail {

[[nodiscard]] inline std::size_t count_ones(std::span<const std::uint8_t> bits) noexcept
{
    std::size_t ones = 0;
    for (const auto b : bits) {
        ones += b;
    }
    return ones;
}

/// (|x|_0, |x|_1)
inline void one_min_max(std::span<const std::uint8_t> bits, ObjectiveValue* out) noexcept
{
    const auto ones = static_cast<ObjectiveValue>(count_ones(bits));
    out[0] = static_cast<ObjectiveValue>(bits.size()) - ones;
    out[1] = ones;
}

/// (leading ones, trailing zeros)
inline void leading_ones_trailing_zeros(std::span<const std::uint8_t> bits, ObjectiveValue* out) noexcept
{
    std::size_t prefix = 0;
    while (prefix < bits.size() && bits[prefix] != 0) {
        ++prefix;
    }
    std::size_t suffix = 0;
    while (suffix < bits.size() && bits[bits.size() - 1 - suffix] == 0) {
        ++suffix;
    }
    out[0] = static_cast<ObjectiveValue>(prefix);
    out[1] = static_cast<ObjectiveValue>(suffix);
}

/// J_k applied to the count c of the relevant bit value in a string of length n.
[[nodiscard]] constexpr ObjectiveValue jump_component(std::size_t c, std::size_t n, std::size_t k) noexcept
{
    if (c <= n - k || c == n) {
        return static_cast<ObjectiveValue>(k + c);
    }
    return static_cast<ObjectiveValue>(n - c);
}

/// (J^(1), J^(0))
inline void one_jump_zero_jump(std::span<const std::uint8_t> bits, std::size_t k, ObjectiveValue* out) noexcept
{
    const std::size_t n = bits.size();
    const std::size_t ones = count_ones(bits);
    out[0] = jump_component(ones, n, k);
    out[1] = jump_component(n - ones, n, k);
}

} // namespace detail

/// A validated benchmark instance.
class Benchmark {
public:
    /// Validates `spec`; throws ConfigError on any violated constraint.
    explicit Benchmark(const BenchmarkSpec& spec) : spec_(spec)
    {
        if (spec.n < 1) {
            throw ConfigError("benchmark: n must be at least 1");
        }
        if (spec.m == 3) {
            if (spec.family != Family::OneMinMax) {
                throw ConfigError("benchmark: three objectives are only defined for OneMinMax");
            }
            if (spec.n % 2 != 0) {
                throw ConfigError("benchmark: 3-objective OneMinMax needs an even n");
            }
        } else if (spec.m < 2 || spec.m % 2 != 0) {
            throw ConfigError("benchmark: m must be 2, 3, or an even number >= 4");
        } else if (spec.n % (spec.m / 2) != 0) {
            throw ConfigError("benchmark: m/2 must divide n");
        }
        if (spec.family == Family::OneJumpZeroJump) {
            const std::size_t block = block_length();
            if (spec.k < 2 || 2 * spec.k > block) {
                throw ConfigError("benchmark: OneJumpZeroJump needs k in [2 .. n'/2]");
            }
        } else if (spec.k != 0) {
            throw ConfigError("benchmark: k is only meaningful for OneJumpZeroJump");
        }
    }

    [[nodiscard]] const BenchmarkSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] std::size_t n() const noexcept { return spec_.n; }
    [[nodiscard]] std::size_t m() const noexcept { return spec_.m; }
    [[nodiscard]] bool is_three_objective() const noexcept { return spec_.m == 3; }

    /// Number of blocks m' (1 for the bi-objective case, unused for 3 objectives).
    [[nodiscard]] std::size_t block_count() const noexcept { return is_three_objective() ? 1 : spec_.m / 2; }
    /// Block length n'.
    [[nodiscard]] std::size_t block_length() const noexcept { return spec_.n / block_count(); }

    [[nodiscard]] ObjectiveVector evaluate(const BitString& x) const
    {
        detail::require(x.size() == spec_.n, "evaluate: genotype length differs from benchmark n");
        ObjectiveVector out(spec_.m);
        const auto bits = x.bits();
        if (is_three_objective()) {
            const std::size_t half = spec_.n / 2;
            const auto first = static_cast<ObjectiveValue>(detail::count_ones(bits.first(half)));
            const auto second = static_cast<ObjectiveValue>(detail::count_ones(bits.subspan(half)));
            out[0] = static_cast<ObjectiveValue>(spec_.n) - first - second;
            out[1] = first;
            out[2] = second;
            return out;
        }
        const std::size_t len = block_length();
        for (std::size_t b = 0; b < block_count(); ++b) {
            const auto block = bits.subspan(b * len, len);
            ObjectiveValue* slot = out.data() + 2 * b;
            switch (spec_.family) {
            case Family::OneMinMax: detail::one_min_max(block, slot); break;
            case Family::LeadingOnesTrailingZeros: detail::leading_ones_trailing_zeros(block, slot); break;
            case Family::OneJumpZeroJump: detail::one_jump_zero_jump(block, spec_.k, slot); break;
            }
        }
        return out;
    }

    ObjectiveVector operator()(const BitString& x) const { return evaluate(x); }

private:
    BenchmarkSpec spec_;
};

/// Bi-objective front of one block of length `len`.
[[nodiscard]] inline std::vector<ObjectiveVector> block_front(Family family, std::size_t len, std::size_t k)
{
    std::vector<ObjectiveVector> front;
    const auto n = static_cast<ObjectiveValue>(len);
    if (family == Family::OneJumpZeroJump) {
        const auto gap = static_cast<ObjectiveValue>(k);
        front.push_back({gap, n + gap});
        for (ObjectiveValue i = 2 * gap; i <= n; ++i) {
            front.push_back({i, n + 2 * gap - i});
        }
        front.push_back({n + gap, gap});
    } else {
        for (ObjectiveValue i = 0; i <= n; ++i) {
            front.push_back({i, n - i});
        }
    }
    return front;
}

/// Closed-form Pareto front.
[[nodiscard]] inline ParetoFront pareto_front(const Benchmark& benchmark)
{
    const auto& spec = benchmark.spec();
    std::vector<ObjectiveVector> values;
    if (benchmark.is_three_objective()) {
        const auto half = static_cast<ObjectiveValue>(spec.n / 2);
        for (ObjectiveValue a = 0; a <= half; ++a) {
            for (ObjectiveValue b = 0; b <= half; ++b) {
                values.push_back({static_cast<ObjectiveValue>(spec.n) - a - b, a, b});
            }
        }
        return ParetoFront(std::move(values));
    }

    // m'-fold direct product of the block front
    const auto block = block_front(spec.family, benchmark.block_length(), spec.k);
    values.push_back({});
    for (std::size_t b = 0; b < benchmark.block_count(); ++b) {
        std::vector<ObjectiveVector> extended;
        extended.reserve(values.size() * block.size());
        for (const auto& prefix : values) {
            for (const auto& pair : block) {
                ObjectiveVector v = prefix;
                v.insert(v.end(), pair.begin(), pair.end());
                extended.push_back(std::move(v));
            }
        }
        values = std::move(extended);
    }
    return ParetoFront(std::move(values));
}

/// Largest n accepted by pareto_front_bruteforce.
inline constexpr std::size_t kBruteForceMaxBits = 24;

/// Pareto front by exhaustive enumeration of {0,1}^n. Test oracle only.
[[nodiscard]] inline ParetoFront pareto_front_bruteforce(const Benchmark& benchmark)
{
    const std::size_t n = benchmark.n();
    if (n > kBruteForceMaxBits) {
        throw ConfigError("pareto_front_bruteforce: 2^n exceeds the enumeration budget of 2^24");
    }
    std::unordered_map<ObjectiveVector, char, ObjectiveVectorHash> seen;
    BitString x(n);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
        for (std::size_t i = 0; i < n; ++i) {
            x.set(i, ((code >> i) & 1U) != 0);
        }
        seen.emplace(benchmark.evaluate(x), 0);
    }
    std::vector<ObjectiveVector> distinct;
    distinct.reserve(seen.size());
    for (auto& [value, unused] : seen) {
        distinct.push_back(value);
    }
    std::vector<ObjectiveVector> front;
    for (const auto& candidate : distinct) {
        const bool dominated = std::any_of(distinct.begin(), distinct.end(), [&](const ObjectiveVector& other) {
            return strictly_dominates(other, candidate);
        });
        if (!dominated) {
            front.push_back(candidate);
        }
    }
    return ParetoFront(std::move(front));
}

// ---------------------------------------------------------------------------
// Names used on the command line and in CSV files
// ---------------------------------------------------------------------------

/// CLI/CSV name of a spec: omm, lotz, ojzj, omm-m, lotz-m, ojzj-m, omm3.
[[nodiscard]] inline std::string benchmark_name(const BenchmarkSpec& spec)
{
    if (spec.m == 3) {
        return "omm3";
    }
    std::string base;
    switch (spec.family) {
    case Family::OneMinMax: base = "omm"; break;
    case Family::LeadingOnesTrailingZeros: base = "lotz"; break;
    case Family::OneJumpZeroJump: base = "ojzj"; break;
    }
    return spec.m == 2 ? base : base + "-m";
}

/// Builds a spec from a CLI/CSV name. `m` is ignored for the fixed-arity names
/// (omm, lotz, ojzj are bi-objective, omm3 has three objectives).
[[nodiscard]] inline BenchmarkSpec parse_benchmark(std::string_view name, std::size_t n, std::size_t m, std::size_t k)
{
    BenchmarkSpec spec;
    spec.n = n;
    spec.k = k;
    std::string_view base = name;
    bool many = false;
    if (name == "omm3") {
        spec.family = Family::OneMinMax;
        spec.m = 3;
        return spec;
    }
    if (base.ends_with("-m")) {
        base.remove_suffix(2);
        many = true;
    }
    if (base == "omm") {
        spec.family = Family::OneMinMax;
    } else if (base == "lotz") {
        spec.family = Family::LeadingOnesTrailingZeros;
    } else if (base == "ojzj") {
        spec.family = Family::OneJumpZeroJump;
    } else {
        throw ConfigError("unknown benchmark '" + std::string(name) + "'");
    }
    if (many) {
        if (m < 4 || m % 2 != 0) {
            throw ConfigError("benchmark '" + std::string(name) + "' needs an even m >= 4");
        }
        spec.m = m;
    } else {
        spec.m = 2;
    }
    return spec;
}

} // namespace bnsga
