#pragma once

/// @file experiments.hpp
/// @brief Seeded trials, configuration sweeps, CSV persistence and summaries.
///
/// CSV schema of trial records (header exact):
///
///     benchmark,n,m,k,algo,N,pop_mult,seed,iterations,evaluations,covered
///
/// `k` is 0 for benchmarks without a gap parameter, `pop_mult` is empty when
/// the population size was given directly, `covered` is `true` or `false`.

#include "benchmarks.hpp"
#include "core.hpp"
#include "nsga2.hpp"
#include "oracle.hpp"
#include "stats.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

namespace bnsga {

/// Default evaluation budget per trial, as a multiple of N.
inline constexpr std::uint64_t kDefaultBudgetFactor = 10'000;

/// One cell of an experiment plan.
struct TrialConfig {
    BenchmarkSpec benchmark;
    TieBreak algo = TieBreak::Balanced;
    std::size_t population_size = 0;
    /// Set when population_size was derived as round(pop_mult * M).
    std::optional<double> pop_mult;
    /// Evaluation budget; 0 selects kDefaultBudgetFactor * N.
    std::uint64_t budget = 0;

    [[nodiscard]] std::uint64_t effective_budget() const noexcept
    {
        return budget == 0 ? kDefaultBudgetFactor * population_size : budget;
    }
};

/// Outcome of one trial.
struct RunRecord {
    std::string benchmark;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t k = 0;
    TieBreak algo = TieBreak::Balanced;
    std::size_t population_size = 0;
    std::optional<double> pop_mult;
    std::uint64_t seed = 0;
    std::uint64_t iterations = 0;
    std::uint64_t evaluations = 0;
    bool covered = false;

    // Not persisted.
    double final_front_fraction = 0.0; ///< front share held by the last population
    double best_front_fraction = 0.0;  ///< largest share held by any population
};

/// round(multiplier * M) for the benchmark's front size M, at least 1.
[[nodiscard]] inline std::size_t population_from_multiplier(const Benchmark& benchmark, double multiplier)
{
    if (!(multiplier > 0.0) || !std::isfinite(multiplier)) {
        throw ConfigError("pop-mult must be a positive number");
    }
    const auto front = static_cast<double>(pareto_front(benchmark).size());
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(multiplier * front)));
}

/// Trial seed: SplitMix64 chain over (base seed, config index, trial index).
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t config_index,
                                                  std::uint64_t trial_index) noexcept
{
    std::uint64_t h = splitmix64(base_seed);
    h = splitmix64(h ^ config_index);
    return splitmix64(h ^ (trial_index * 0xD6E8FEB86659FD93ULL));
}

/// Validates the configuration; throws ConfigError before any work is done.
inline Benchmark validate_trial(const TrialConfig& config)
{
    Benchmark benchmark(config.benchmark);
    if (config.population_size < 1) {
        throw ConfigError("population size must be at least 1");
    }
    if (config.effective_budget() < config.population_size) {
        throw ConfigError("budget is smaller than N: the initial population cannot be evaluated");
    }
    return benchmark;
}

/// Runs initialization and generations until the population covers the
/// Pareto front or the next generation would exceed the budget.
///
/// `observer` is forwarded to every step(); see NoStepObserver.
template <typename Observer = NoStepObserver>
[[nodiscard]] RunRecord run_trial(const TrialConfig& config, std::uint64_t seed, StepOptions options = {},
                                  Observer&& observer = {})
{
    const Benchmark benchmark = validate_trial(config);
    const ParetoFront front = pareto_front(benchmark);
    const std::size_t population_size = config.population_size;
    const std::uint64_t budget = config.effective_budget();

    RunRecord record;
    record.benchmark = benchmark_name(config.benchmark);
    record.n = config.benchmark.n;
    record.m = config.benchmark.m;
    record.k = config.benchmark.k;
    record.algo = config.algo;
    record.population_size = population_size;
    record.pop_mult = config.pop_mult;
    record.seed = seed;

    RngStream rng(seed);
    std::vector<Individual> population = initial_population(benchmark.n(), population_size, benchmark, rng);
    std::uint64_t evaluations = population_size;
    CoverageTracker coverage(front);
    coverage.update(population);
    double best_fraction = coverage.present_fraction();

    std::uint64_t iterations = 0;
    while (!coverage.population_covers() && evaluations + population_size <= budget) {
        auto outcome = step(std::move(population), benchmark, config.algo, rng, options, observer);
        population = std::move(outcome.next_population);
        evaluations += population_size;
        ++iterations;
        coverage.update(population);
        best_fraction = std::max(best_fraction, coverage.present_fraction());
    }

    record.iterations = iterations;
    record.evaluations = evaluations;
    record.covered = coverage.population_covers();
    record.final_front_fraction = coverage.present_fraction();
    record.best_front_fraction = best_fraction;
    return record;
}

/// Runs `runs_per_config` trials of every config on up to `parallelism`
/// threads. Records come back ordered by (config index, trial index).
///
/// If a trial throws, no further trials are started; the exception is
/// rethrown after the finished records were handed to `on_partial` (if set).
inline std::vector<RunRecord>
sweep(const std::vector<TrialConfig>& plan, std::size_t runs_per_config, std::uint64_t base_seed,
      std::size_t parallelism = 1,
      const std::function<void(const std::vector<RunRecord>&)>& on_partial = {})
{
    if (plan.empty()) {
        throw ConfigError("sweep: the plan is empty");
    }
    for (const auto& config : plan) {
        (void)validate_trial(config);
    }
    const std::size_t total = plan.size() * runs_per_config;
    std::vector<std::optional<RunRecord>> slots(total);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (!failed.load()) {
            const std::size_t task = next.fetch_add(1);
            if (task >= total) {
                return;
            }
            const std::size_t config_index = task / runs_per_config;
            const std::size_t trial_index = task % runs_per_config;
            try {
                slots[task] = run_trial(plan[config_index], derive_seed(base_seed, config_index, trial_index));
            } catch (...) {
                const std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                failed.store(true);
            }
        }
    };

    const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(total, 1));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }

    std::vector<RunRecord> records;
    records.reserve(total);
    for (auto& slot : slots) {
        if (slot) {
            records.push_back(std::move(*slot));
        }
    }
    if (error) {
        if (on_partial) {
            on_partial(records);
        }
        std::rethrow_exception(error);
    }
    return records;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr std::string_view kRecordCsvHeader = "benchmark,n,m,k,algo,N,pop_mult,seed,iterations,evaluations,covered";

namespace detail {

/// Shortest decimal text that parses back to exactly `value`.
[[nodiscard]] inline std::string format_double(double value)
{
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return ec == std::errc{} ? std::string(buffer, end) : std::string("nan");
}

[[nodiscard]] inline std::vector<std::string_view> split_csv_line(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

template <typename T>
[[nodiscard]] bool parse_number(std::string_view text, T& out)
{
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

inline void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

} // namespace detail

[[nodiscard]] inline std::string to_csv_row(const RunRecord& r)
{
    std::ostringstream row;
    row << r.benchmark << ',' << r.n << ',' << r.m << ',' << r.k << ',' << to_string(r.algo) << ','
        << r.population_size << ',' << (r.pop_mult ? detail::format_double(*r.pop_mult) : std::string()) << ','
        << r.seed << ',' << r.iterations << ',' << r.evaluations << ',' << (r.covered ? "true" : "false");
    return row.str();
}

[[nodiscard]] inline std::string records_to_csv(const std::vector<RunRecord>& records)
{
    std::string out(kRecordCsvHeader);
    out += '\n';
    for (const auto& r : records) {
        out += to_csv_row(r);
        out += '\n';
    }
    return out;
}

inline void write_records_csv(const std::string& path, const std::vector<RunRecord>& records)
{
    detail::write_file(path, records_to_csv(records));
}

/// Parses record CSV text. Errors name the 1-based line number.
[[nodiscard]] inline std::vector<RunRecord> parse_records_csv(std::string_view text)
{
    std::vector<RunRecord> records;
    std::size_t line_number = 0;
    std::size_t start = 0;
    bool header_seen = false;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        const auto fail = [&](const std::string& what) {
            return IoError("line " + std::to_string(line_number) + ": " + what);
        };
        if (!header_seen) {
            if (line != kRecordCsvHeader) {
                throw fail("unexpected header, expected '" + std::string(kRecordCsvHeader) + "'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 11) {
            throw fail("expected 11 fields, found " + std::to_string(fields.size()));
        }
        RunRecord r;
        r.benchmark = std::string(fields[0]);
        if (!detail::parse_number(fields[1], r.n) || !detail::parse_number(fields[2], r.m) ||
            !detail::parse_number(fields[3], r.k) || !detail::parse_number(fields[5], r.population_size) ||
            !detail::parse_number(fields[7], r.seed) || !detail::parse_number(fields[8], r.iterations) ||
            !detail::parse_number(fields[9], r.evaluations)) {
            throw fail("malformed integer field");
        }
        try {
            r.algo = parse_tie_break(fields[4]);
            (void)parse_benchmark(r.benchmark, r.n, r.m, r.k);
        } catch (const ConfigError& e) {
            throw fail(e.what());
        }
        if (!fields[6].empty()) {
            double mult = 0.0;
            if (!detail::parse_number(fields[6], mult)) {
                throw fail("malformed pop_mult");
            }
            r.pop_mult = mult;
        }
        if (fields[10] == "true") {
            r.covered = true;
        } else if (fields[10] == "false") {
            r.covered = false;
        } else {
            throw fail("covered must be true or false");
        }
        records.push_back(std::move(r));
    }
    if (!header_seen) {
        throw IoError("line 1: missing header");
    }
    return records;
}

[[nodiscard]] inline std::vector<RunRecord> read_records_csv(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_records_csv(buffer.str());
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Summary
// ---------------------------------------------------------------------------

/// Statistics of one (benchmark, n, m, k, N, pop_mult) cell, both algorithms side by side.
struct SummaryRow {
    std::string benchmark;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t k = 0;
    std::size_t population_size = 0;
    std::optional<double> pop_mult;
    std::optional<Descriptive> classic;
    std::optional<Descriptive> balanced;
    std::size_t classic_covered = 0;
    std::size_t balanced_covered = 0;
    /// One-sided test "balanced needs fewer evaluations than classic"; set when both are present.
    std::optional<StatResult> test;
};

inline constexpr std::string_view kSummaryCsvHeader =
    "benchmark,n,m,k,N,pop_mult,classic_runs,classic_covered,classic_mean,classic_median,classic_stddev,"
    "balanced_runs,balanced_covered,balanced_mean,balanced_median,balanced_stddev,u_statistic,p_value,p_method";

/// Groups records by configuration and compares the two algorithms per cell.
/// Rows are ordered by (benchmark, n, m, k, N, pop_mult).
[[nodiscard]] inline std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records)
{
    using Key = std::tuple<std::string, std::size_t, std::size_t, std::size_t, std::size_t, std::optional<double>>;
    struct Cell {
        std::vector<std::uint64_t> classic;
        std::vector<std::uint64_t> balanced;
        std::size_t classic_covered = 0;
        std::size_t balanced_covered = 0;
    };
    std::map<Key, Cell> cells;
    for (const auto& r : records) {
        auto& cell = cells[Key{r.benchmark, r.n, r.m, r.k, r.population_size, r.pop_mult}];
        if (r.algo == TieBreak::Classic) {
            cell.classic.push_back(r.evaluations);
            cell.classic_covered += static_cast<std::size_t>(r.covered);
        } else {
            cell.balanced.push_back(r.evaluations);
            cell.balanced_covered += static_cast<std::size_t>(r.covered);
        }
    }

    std::vector<SummaryRow> rows;
    for (const auto& [key, cell] : cells) {
        SummaryRow row;
        std::tie(row.benchmark, row.n, row.m, row.k, row.population_size, row.pop_mult) = key;
        row.classic_covered = cell.classic_covered;
        row.balanced_covered = cell.balanced_covered;
        if (!cell.classic.empty()) {
            row.classic = describe(cell.classic);
        }
        if (!cell.balanced.empty()) {
            row.balanced = describe(cell.balanced);
        }
        if (row.classic && row.balanced) {
            const std::vector<double> a(cell.balanced.begin(), cell.balanced.end());
            const std::vector<double> b(cell.classic.begin(), cell.classic.end());
            StatResult test = mann_whitney_one_sided(a, b, Alternative::Less);
            test.group_a = "balanced";
            test.group_b = "classic";
            row.test = std::move(test);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

[[nodiscard]] inline std::string summary_to_csv(const std::vector<SummaryRow>& rows)
{
    const auto describe_fields = [](const std::optional<Descriptive>& d, std::size_t covered) {
        if (!d) {
            return std::string(",,,,");
        }
        return std::to_string(d->count) + ',' + std::to_string(covered) + ',' + detail::format_double(d->mean) + ',' +
               detail::format_double(d->median) + ',' + detail::format_double(d->stddev);
    };
    std::string out(kSummaryCsvHeader);
    out += '\n';
    for (const auto& row : rows) {
        out += row.benchmark + ',' + std::to_string(row.n) + ',' + std::to_string(row.m) + ',' +
               std::to_string(row.k) + ',' + std::to_string(row.population_size) + ',' +
               (row.pop_mult ? detail::format_double(*row.pop_mult) : std::string()) + ',';
        out += describe_fields(row.classic, row.classic_covered) + ',';
        out += describe_fields(row.balanced, row.balanced_covered) + ',';
        if (row.test) {
            out += detail::format_double(row.test->u_statistic) + ',' + detail::format_double(row.test->p_value) +
                   ',' + to_string(row.test->method);
        } else {
            out += ",,";
        }
        out += '\n';
    }
    return out;
}

inline void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows)
{
    detail::write_file(path, summary_to_csv(rows));
}

} // namespace bnsga
