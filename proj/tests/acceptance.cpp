// Acceptance checks. Prints one PASS/FAIL line per criterion.
//
//   acceptance                 run every criterion
//   acceptance <criterion>...  run the named ones
//
// Exit status is 0 only if every requested criterion passed.

#include <bnsga/bnsga.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace bnsga;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x, int precision = 4)
{
    std::ostringstream s;
    s.precision(precision);
    s << x;
    return s.str();
}

double mean_evaluations(const std::vector<RunRecord>& records)
{
    std::vector<std::uint64_t> evals;
    for (const auto& r : records) {
        evals.push_back(r.evaluations);
    }
    return describe(evals).mean;
}

std::vector<double> evaluations_of(const std::vector<RunRecord>& records)
{
    std::vector<double> out;
    for (const auto& r : records) {
        out.push_back(static_cast<double>(r.evaluations));
    }
    return out;
}

std::size_t covered_count(const std::vector<RunRecord>& records)
{
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const RunRecord& r) { return r.covered; }));
}

TrialConfig config_for(BenchmarkSpec spec, TieBreak algo, std::size_t population, std::uint64_t budget = 0)
{
    TrialConfig c;
    c.benchmark = spec;
    c.algo = algo;
    c.population_size = population;
    c.budget = budget;
    return c;
}

std::size_t front_size(const BenchmarkSpec& spec) { return pareto_front(Benchmark(spec)).size(); }

// ---------------------------------------------------------------------------

Verdict oracle_equivalence()
{
    std::vector<BenchmarkSpec> specs;
    for (std::size_t n = 1; n <= 12; ++n) {
        specs.push_back({Family::OneMinMax, n, 2, 0});
        specs.push_back({Family::LeadingOnesTrailingZeros, n, 2, 0});
        for (std::size_t k : {2, 3}) {
            if (2 * k <= n) {
                specs.push_back({Family::OneJumpZeroJump, n, 2, k});
            }
        }
    }
    specs.push_back({Family::OneMinMax, 8, 4, 0});
    specs.push_back({Family::LeadingOnesTrailingZeros, 8, 4, 0});
    specs.push_back({Family::OneJumpZeroJump, 8, 4, 2});

    std::size_t mismatches = 0;
    std::string first;
    for (const auto& spec : specs) {
        const Benchmark b(spec);
        if (!(pareto_front(b) == pareto_front_bruteforce(b))) {
            if (mismatches++ == 0) {
                first = benchmark_name(spec) + " n=" + std::to_string(spec.n);
            }
        }
    }
    return {mismatches == 0, std::to_string(specs.size()) + " instances, " + std::to_string(mismatches) +
                                 " mismatches" + (first.empty() ? "" : " (first: " + first + ")")};
}

std::vector<std::size_t> inductive_ranks(const std::vector<ObjectiveVector>& values)
{
    std::vector<std::size_t> rank(values.size(), 0);
    std::size_t assigned = 0;
    for (std::size_t j = 1; assigned < values.size(); ++j) {
        std::vector<std::size_t> layer;
        for (std::size_t x = 0; x < values.size(); ++x) {
            if (rank[x] != 0) {
                continue;
            }
            bool dominated = false;
            for (std::size_t y = 0; y < values.size() && !dominated; ++y) {
                dominated = rank[y] == 0 && strictly_dominates(values[y], values[x]);
            }
            if (!dominated) {
                layer.push_back(x);
            }
        }
        for (const auto x : layer) {
            rank[x] = j;
        }
        assigned += layer.size();
    }
    return rank;
}

Verdict sorting_oracle()
{
    RngStream rng(20240501);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t size = 1 + rng.below(64);
        const std::size_t m = 1 + rng.below(4);
        const std::uint64_t spread = 1 + rng.below(10);
        std::vector<ObjectiveVector> values(size, ObjectiveVector(m));
        std::vector<Individual> population;
        for (auto& v : values) {
            for (auto& x : v) {
                x = static_cast<ObjectiveValue>(rng.below(spread));
            }
            population.push_back(Individual{BitString(1), v});
        }
        const auto ranked = nondominated_sort(std::move(population));
        mismatches += static_cast<std::size_t>(ranked.rank != inductive_ranks(values));
    }
    return {mismatches == 0, "500 populations, " + std::to_string(mismatches) + " mismatches"};
}

Verdict lemma_assertions()
{
    struct Case {
        BenchmarkSpec spec;
        std::size_t population;
    };
    const std::vector<Case> cases{
        {{Family::OneMinMax, 30, 2, 0}, 4 * 31},
        {{Family::OneJumpZeroJump, 20, 2, 2}, 4 * (20 - 4 + 3)},
    };
    LemmaViolations total;
    std::size_t uncovered = 0;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        for (std::uint64_t trial = 0; trial < 20; ++trial) {
            LemmaMonitor monitor(cases[c].spec.m, LemmaChecks{});
            const auto record = run_trial(config_for(cases[c].spec, TieBreak::Balanced, cases[c].population),
                                          derive_seed(7, c, trial), StepOptions{true}, monitor);
            total += monitor.violations();
            uncovered += static_cast<std::size_t>(!record.covered);
        }
    }
    return {total.total() == 0,
            std::to_string(total.generations) + " generations checked; violations: positive-cd " +
                std::to_string(total.positive_cd) + ", retention " + std::to_string(total.retention) +
                ", survival " + std::to_string(total.survival) + " (" + std::to_string(uncovered) +
                " runs hit the budget)"};
}

Verdict population_size_robustness()
{
    bool pass = true;
    std::string detail;
    std::uint64_t config_index = 0;
    for (const std::size_t n : {30, 50}) {
        const BenchmarkSpec spec{Family::OneMinMax, n, 2, 0};
        const std::size_t front = front_size(spec);
        std::map<std::pair<TieBreak, std::size_t>, std::vector<RunRecord>> cells;
        for (const std::size_t factor : {4, 16}) {
            for (const auto algo : {TieBreak::Classic, TieBreak::Balanced}) {
                cells[{algo, factor}] =
                    sweep({config_for(spec, algo, factor * front)}, 50, 100 + config_index++, 1);
            }
        }
        const double c4 = mean_evaluations(cells[{TieBreak::Classic, 4}]);
        const double c16 = mean_evaluations(cells[{TieBreak::Classic, 16}]);
        const double b4 = mean_evaluations(cells[{TieBreak::Balanced, 4}]);
        const double b16 = mean_evaluations(cells[{TieBreak::Balanced, 16}]);
        const auto test = mann_whitney_one_sided(evaluations_of(cells[{TieBreak::Balanced, 16}]),
                                                 evaluations_of(cells[{TieBreak::Classic, 16}]), Alternative::Less);
        const bool ok = c16 >= 2.0 * c4 && b16 <= 1.6 * b4 && test.p_value <= 0.05;
        pass = pass && ok;
        detail += "n=" + std::to_string(n) + ": classic " + fmt(c16 / c4) + "x, balanced " + fmt(b16 / b4) +
                  "x, p=" + fmt(test.p_value, 3) + "; ";
    }
    return {pass, detail};
}

Verdict ojzj_desk_scale()
{
    const BenchmarkSpec spec{Family::OneJumpZeroJump, 30, 2, 3};
    const std::size_t front = front_size(spec);
    // Budget above the default so that no run at this jump size is cut short.
    const std::uint64_t budget_factor = 100'000;
    std::map<std::pair<TieBreak, std::size_t>, std::vector<RunRecord>> cells;
    std::uint64_t config_index = 0;
    for (const std::size_t factor : {4, 8}) {
        for (const auto algo : {TieBreak::Classic, TieBreak::Balanced}) {
            const std::size_t population = factor * front;
            cells[{algo, factor}] =
                sweep({config_for(spec, algo, population, budget_factor * population)}, 50, 300 + config_index++, 1);
        }
    }
    const auto& balanced = cells[{TieBreak::Balanced, 8}];
    const auto& classic = cells[{TieBreak::Classic, 8}];
    const auto test = mann_whitney_one_sided(evaluations_of(balanced), evaluations_of(classic), Alternative::Less);
    std::string detail;
    for (const auto& [key, records] : cells) {
        detail += std::string(to_string(key.first)) + "@" + std::to_string(key.second) + "M mean " +
                  fmt(mean_evaluations(records), 6) + " (" + std::to_string(covered_count(records)) + "/50 covered); ";
    }
    detail += "p=" + fmt(test.p_value, 3);
    return {test.p_value <= 0.05, detail};
}

Verdict many_objective_separation()
{
    const BenchmarkSpec spec{Family::OneMinMax, 40, 4, 0};
    const std::size_t population = 4 * front_size(spec);

    const auto balanced = sweep({config_for(spec, TieBreak::Balanced, population)}, 20, 500, 1);
    const std::size_t covered = covered_count(balanced);
    const double mean = mean_evaluations(balanced);

    // 1000 iterations after initialization
    const auto classic = sweep({config_for(spec, TieBreak::Classic, population, population * 1001)}, 20, 501, 1);
    std::vector<double> fractions;
    for (const auto& r : classic) {
        fractions.push_back(r.best_front_fraction);
    }
    std::sort(fractions.begin(), fractions.end());
    const double median = (fractions[9] + fractions[10]) / 2.0;

    const bool pass = covered == 20 && mean <= 300'000.0 && median <= 0.8;
    return {pass, "N=" + std::to_string(population) + "; balanced " + std::to_string(covered) +
                      "/20 covered, mean evaluations " + fmt(mean, 7) + "; classic median coverage " +
                      fmt(100.0 * median, 3) + "% (max " + fmt(100.0 * fractions.back(), 3) + "%)"};
}

double enumerated_p(const std::vector<double>& a, const std::vector<double>& b, Alternative alternative)
{
    // Every assignment of the pooled values to a sample of size |a| is equally likely.
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto u_of = [&](const std::vector<char>& in_a) {
        double u = 0;
        for (std::size_t i = 0; i < pooled.size(); ++i) {
            for (std::size_t j = 0; j < pooled.size(); ++j) {
                if (in_a[i] != 0 && in_a[j] == 0 && pooled[j] < pooled[i]) {
                    u += 1;
                }
            }
        }
        return u;
    };
    std::vector<char> observed(pooled.size(), 0);
    std::fill(observed.begin(), observed.begin() + static_cast<std::ptrdiff_t>(a.size()), 1);
    const double u_obs = u_of(observed);
    std::vector<char> mask(observed);
    std::sort(mask.begin(), mask.end());
    std::size_t total = 0;
    std::size_t extreme = 0;
    do {
        const double u = u_of(mask);
        ++total;
        extreme += static_cast<std::size_t>(alternative == Alternative::Less ? u <= u_obs : u >= u_obs);
    } while (std::next_permutation(mask.begin(), mask.end()));
    return static_cast<double>(extreme) / static_cast<double>(total);
}

Verdict mann_whitney_correctness()
{
    const std::vector<double> low{1, 2, 3};
    const std::vector<double> high{4, 5, 6};
    const double example = mann_whitney_one_sided(low, high, Alternative::Less).p_value;
    bool pass = std::abs(example - 1.0 / 20.0) <= 1e-12;

    std::size_t checked = 0;
    std::size_t mismatches = 0;
    for (std::size_t size = 1; size <= 5; ++size) {
        std::vector<char> mask(2 * size, 0);
        std::fill(mask.begin() + static_cast<std::ptrdiff_t>(size), mask.end(), 1);
        do {
            std::vector<double> a;
            std::vector<double> b;
            for (std::size_t r = 0; r < mask.size(); ++r) {
                (mask[r] != 0 ? a : b).push_back(static_cast<double>(r + 1));
            }
            for (const auto alt : {Alternative::Less, Alternative::Greater}) {
                const double p = mann_whitney_one_sided(a, b, alt).p_value;
                ++checked;
                mismatches += static_cast<std::size_t>(std::abs(p - enumerated_p(a, b, alt)) > 1e-12);
            }
        } while (std::next_permutation(mask.begin(), mask.end()));
    }
    pass = pass && mismatches == 0;
    return {pass, "p([1,2,3] < [4,5,6]) = " + fmt(example, 6) + "; " + std::to_string(checked) + " samples, " +
                      std::to_string(mismatches) + " mismatches"};
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"oracle_equivalence", oracle_equivalence},
        {"sorting_oracle", sorting_oracle},
        {"lemma_assertions", lemma_assertions},
        {"population_size_robustness", population_size_robustness},
        {"ojzj_desk_scale", ojzj_desk_scale},
        {"many_objective_separation", many_objective_separation},
        {"mann_whitney_correctness", mann_whitney_correctness},
    };

    std::vector<std::string> requested(argv + 1, argv + argc);
    if (requested.empty()) {
        for (const auto& [name, fn] : criteria) {
            requested.push_back(name);
        }
    }

    bool all = true;
    for (const auto& name : requested) {
        const auto it = std::find_if(criteria.begin(), criteria.end(), [&](const auto& c) { return c.first == name; });
        if (it == criteria.end()) {
            std::cout << "FAIL " << name << ": unknown criterion\n";
            all = false;
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = it->second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << " [" << fmt(seconds, 3) << " s]"
                  << std::endl;
        all = all && v.pass;
    }
    return all ? 0 : 1;
}
