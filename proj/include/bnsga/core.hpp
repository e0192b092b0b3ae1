#pragma once

/// @file core.hpp
/// @brief Genotypes, objective vectors, the domination order and the seeded RNG.
///
/// Everything here is a value type. The only stateful object is RngStream,
/// which is owned by exactly one trial.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

namespace bnsga {

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Raised for invalid run or benchmark configuration (CLI exit code 1).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised for file-system and parse failures (CLI exit code 2).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const char* message)
{
    if (!condition) {
        throw ContractViolation(message);
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Random numbers
// ---------------------------------------------------------------------------

/// SplitMix64 finalizer. Used to derive well-separated seeds.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31U);
}

/// Seeded random stream with a platform-independent draw sequence.
///
/// Raw draws come from `std::mt19937_64`, whose output sequence is fixed by
/// the C++ standard. Bounded integers are mapped with Lemire's
/// multiply-and-reject method, so no `std::*_distribution` (whose algorithms
/// are implementation-defined) is involved anywhere.
///
/// A stream is single-owner: never share one between threads.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    /// One raw 64-bit draw.
    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). Requires bound >= 1.
    std::uint64_t below(std::uint64_t bound)
    {
        detail::require(bound >= 1, "RngStream::below: bound must be positive");
        using u128 = unsigned __int128;
        u128 product = static_cast<u128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(product);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                product = static_cast<u128>(next()) * bound;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::uint64_t>(product >> 64U);
    }

    /// Fair coin: true iff the raw draw lies in the lower half of the range.
    bool coin() { return next() < (std::uint64_t{1} << 63U); }

    /// Bernoulli(1/n), exact: one bounded draw compared against zero.
    bool one_in(std::uint64_t n) { return below(n) == 0; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Genotype
// ---------------------------------------------------------------------------

/// Fixed-length bit string. The length is set at construction and never changes.
class BitString {
public:
    explicit BitString(std::size_t n) : bits_(n, 0)
    {
        detail::require(n >= 1, "BitString: length must be at least 1");
    }

    /// Parses a string of '0'/'1' characters, first character is position 0.
    static BitString from_string(std::string_view text)
    {
        BitString x(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) {
            detail::require(text[i] == '0' || text[i] == '1', "BitString: expected only '0' and '1'");
            x.bits_[i] = static_cast<std::uint8_t>(text[i] == '1');
        }
        return x;
    }

    [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
    [[nodiscard]] bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
    void set(std::size_t i, bool value) noexcept { bits_[i] = static_cast<std::uint8_t>(value); }
    void flip(std::size_t i) noexcept { bits_[i] ^= 1U; }

    [[nodiscard]] std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    [[nodiscard]] std::size_t count_ones() const noexcept
    {
        return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
    }
    [[nodiscard]] std::size_t count_zeros() const noexcept { return size() - count_ones(); }

    [[nodiscard]] std::string to_string() const
    {
        std::string out(size(), '0');
        for (std::size_t i = 0; i < size(); ++i) {
            if (bits_[i] != 0) {
                out[i] = '1';
            }
        }
        return out;
    }

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

[[nodiscard]] inline std::size_t hamming_distance(const BitString& a, const BitString& b)
{
    detail::require(a.size() == b.size(), "hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d += static_cast<std::size_t>(a[i] != b[i]);
    }
    return d;
}

/// n independent fair bits, drawn in position order.
[[nodiscard]] inline BitString uniform_bitstring(std::size_t n, RngStream& rng)
{
    BitString x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x.set(i, rng.coin());
    }
    return x;
}

/// Standard bit mutation: every position flips independently with probability 1/n.
/// Consumes exactly n bounded draws, in position order.
[[nodiscard]] inline BitString mutate(const BitString& parent, RngStream& rng)
{
    BitString child = parent;
    const std::size_t n = parent.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (rng.one_in(n)) {
            child.flip(i);
        }
    }
    return child;
}

// ---------------------------------------------------------------------------
// Objectives and domination
// ---------------------------------------------------------------------------

/// Integer objective values, maximized componentwise.
using ObjectiveValue = std::int64_t;
using ObjectiveVector = std::vector<ObjectiveValue>;

struct ObjectiveVectorHash {
    std::size_t operator()(const ObjectiveVector& v) const noexcept
    {
        std::uint64_t h = 0x84222325CBF29CE4ULL ^ v.size();
        for (const auto value : v) {
            h = splitmix64(h ^ static_cast<std::uint64_t>(value));
        }
        return static_cast<std::size_t>(h);
    }
};

/// Outcome of comparing u against v under maximization.
enum class DominationRelation {
    StrictlyDominates,          ///< u >= v everywhere, u > v somewhere
    Equal,                      ///< identical vectors
    IsStrictlyDominated,        ///< mirror of StrictlyDominates
    Incomparable,
};

[[nodiscard]] inline DominationRelation compare(std::span<const ObjectiveValue> u,
                                                std::span<const ObjectiveValue> v)
{
    detail::require(u.size() == v.size(), "compare: objective vectors differ in length");
    bool some_greater = false;
    bool some_less = false;
    for (std::size_t j = 0; j < u.size(); ++j) {
        some_greater = some_greater || u[j] > v[j];
        some_less = some_less || u[j] < v[j];
    }
    if (some_greater && some_less) {
        return DominationRelation::Incomparable;
    }
    if (some_greater) {
        return DominationRelation::StrictlyDominates;
    }
    if (some_less) {
        return DominationRelation::IsStrictlyDominated;
    }
    return DominationRelation::Equal;
}

[[nodiscard]] constexpr DominationRelation mirror(DominationRelation r) noexcept
{
    switch (r) {
    case DominationRelation::StrictlyDominates: return DominationRelation::IsStrictlyDominated;
    case DominationRelation::IsStrictlyDominated: return DominationRelation::StrictlyDominates;
    default: return r;
    }
}

/// u ≻ v
[[nodiscard]] inline bool strictly_dominates(std::span<const ObjectiveValue> u,
                                             std::span<const ObjectiveValue> v)
{
    return compare(u, v) == DominationRelation::StrictlyDominates;
}

/// u ⪰ v
[[nodiscard]] inline bool weakly_dominates(std::span<const ObjectiveValue> u,
                                           std::span<const ObjectiveValue> v)
{
    const auto r = compare(u, v);
    return r == DominationRelation::StrictlyDominates || r == DominationRelation::Equal;
}

/// A genotype with its objective vector, evaluated once at creation.
struct Individual {
    BitString genotype;
    ObjectiveVector objective;
};

/// Builds an Individual by evaluating `genotype` with `evaluate`.
template <typename Evaluate>
    requires std::is_invocable_r_v<ObjectiveVector, Evaluate, const BitString&>
[[nodiscard]] Individual make_individual(BitString genotype, Evaluate&& evaluate)
{
    ObjectiveVector value = std::invoke(std::forward<Evaluate>(evaluate), genotype);
    return Individual{std::move(genotype), std::move(value)};
}

} // namespace bnsga
