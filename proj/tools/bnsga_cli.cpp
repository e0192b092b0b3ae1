// Command-line harness: seeded NSGA-II trials to CSV, and CSV summaries.
//
//   bnsga run --benchmark omm --n 30 --algo balanced --pop-mult 4 --runs 50 --seed 1 --out omm.csv
//   bnsga summarize --in omm.csv --out summary.csv
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error.

#include <bnsga/bnsga.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

struct RunOptions {
    std::string benchmark;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t m = 2;
    std::string algo;
    std::size_t pop_size = 0;
    double pop_mult = 0.0;
    std::size_t runs = 1;
    std::uint64_t seed = 0;
    std::uint64_t budget = 0;
    std::size_t parallelism = 1;
    std::string out;
};

struct SummarizeOptions {
    std::string in;
    std::string out;
};

int execute_run(const RunOptions& opts, bool mult_given)
{
    bnsga::TrialConfig config;
    config.benchmark = bnsga::parse_benchmark(opts.benchmark, opts.n, opts.m, opts.k);
    config.algo = bnsga::parse_tie_break(opts.algo);
    const bnsga::Benchmark benchmark(config.benchmark);
    if (mult_given) {
        config.population_size = bnsga::population_from_multiplier(benchmark, opts.pop_mult);
        config.pop_mult = opts.pop_mult;
    } else {
        config.population_size = opts.pop_size;
    }
    config.budget = opts.budget;
    if (opts.runs < 1) {
        throw bnsga::ConfigError("--runs must be at least 1");
    }

    const auto records = bnsga::sweep({config}, opts.runs, opts.seed, opts.parallelism,
                                      [&](const std::vector<bnsga::RunRecord>& partial) {
                                          bnsga::write_records_csv(opts.out, partial);
                                      });
    bnsga::write_records_csv(opts.out, records);

    std::size_t covered = 0;
    for (const auto& r : records) {
        covered += static_cast<std::size_t>(r.covered);
    }
    std::cout << "wrote " << records.size() << " runs (" << covered << " covered) to " << opts.out << '\n';
    return 0;
}

int execute_summarize(const SummarizeOptions& opts)
{
    const auto records = bnsga::read_records_csv(opts.in);
    const auto rows = bnsga::summarize(records);
    bnsga::write_summary_csv(opts.out, rows);
    std::cout << "wrote " << rows.size() << " summary rows to " << opts.out << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Classic and balanced NSGA-II on pseudo-Boolean benchmarks"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto* run = app.add_subcommand("run", "run seeded trials of one configuration and write a CSV");
    run->add_option("--benchmark", run_opts.benchmark, "omm, lotz, ojzj, omm-m, lotz-m, ojzj-m or omm3")->required();
    run->add_option("--n", run_opts.n, "problem size")->required();
    run->add_option("--k", run_opts.k, "gap parameter (ojzj, ojzj-m)");
    run->add_option("--m", run_opts.m, "number of objectives (-m benchmarks)");
    run->add_option("--algo", run_opts.algo, "classic or balanced")->required();
    auto* size_opt = run->add_option("--pop-size", run_opts.pop_size, "population size N");
    auto* mult_opt = run->add_option("--pop-mult", run_opts.pop_mult, "N as a multiple of the Pareto front size");
    size_opt->excludes(mult_opt);
    mult_opt->excludes(size_opt);
    run->add_option("--runs", run_opts.runs, "number of trials")->required();
    run->add_option("--seed", run_opts.seed, "base seed")->required();
    run->add_option("--budget", run_opts.budget, "evaluation budget per trial (default 10000 * N)");
    run->add_option("--parallelism", run_opts.parallelism, "concurrent trials");
    run->add_option("--out", run_opts.out, "output CSV path")->required();

    SummarizeOptions sum_opts;
    auto* summarize = app.add_subcommand("summarize", "per-configuration statistics and significance tests");
    summarize->add_option("--in", sum_opts.in, "trial CSV written by 'run'")->required();
    summarize->add_option("--out", sum_opts.out, "summary CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed()) {
            if (size_opt->count() == 0 && mult_opt->count() == 0) {
                throw bnsga::ConfigError("one of --pop-size or --pop-mult is required");
            }
            return execute_run(run_opts, mult_opt->count() > 0);
        }
        return execute_summarize(sum_opts);
    } catch (const bnsga::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const bnsga::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const bnsga::ContractViolation& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }
}
