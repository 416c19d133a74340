// Command-line driver: `test` runs the bootstrap exponentiality tests on a
// time,delta CSV, `km` prints the Kaplan-Meier step function, and `power`
// executes a Monte Carlo power grid described by a JSON config.
//
// Exit codes: 0 success, 1 usage or parse error, 2 numerical or
// degenerate-data error.

#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "expgof/bootstrap.hpp"
#include "expgof/io.hpp"
#include "expgof/power_study.hpp"
#include "expgof/report.hpp"

namespace {

using namespace expgof;

// Expands statistic selections into concrete configurations. Tunable
// statistics take every value of `a_values` when given, and their study
// defaults otherwise (L, B: 0.25 and 0.5; H: 0.5 and 1).
std::vector<StatisticId> resolve_statistics(const std::vector<std::string>& tokens,
                                            const std::vector<double>& a_values) {
    if (tokens.empty() && a_values.empty()) return default_statistics();

    std::vector<std::string> names = tokens;
    if (names.empty()) names = {"KS", "CM", "CO", "EP", "L", "B", "H"};

    std::vector<StatisticId> out;
    for (const auto& name : names) {
        if (name.find(':') != std::string::npos) {
            out.push_back(detail::parse_statistic_token(name));
            continue;
        }
        StatisticId probe = detail::parse_statistic_token(
            name + (name == "L" || name == "B" || name == "H" ? ":1" : ""));
        if (!has_tuning(probe.kind)) {
            out.push_back({probe.kind, std::nullopt});
            continue;
        }
        std::vector<double> tunings = a_values;
        if (tunings.empty())
            tunings = probe.kind == StatisticKind::H ? std::vector<double>{0.5, 1.0}
                                                     : std::vector<double>{0.25, 0.5};
        for (double a : tunings) out.push_back({probe.kind, a});
    }
    for (const auto& id : out) id.validate();
    return out;
}

int cmd_test(const std::string& input, const std::vector<std::string>& stats,
             const std::vector<double>& a_values, std::uint64_t B, double alpha,
             std::uint64_t seed, bool json, unsigned threads) {
    const CensoredSample sample = read_censored_csv_file(input);
    const auto statistics = resolve_statistics(stats, a_values);

    const auto start = std::chrono::steady_clock::now();
    const TestReport report =
        build_test_report(std::filesystem::path(input).filename().string(), sample, statistics, B,
                          alpha, seed, threads);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (json)
        std::cout << report_json(report);
    else
        std::cout << report_text(report, wall, resolve_threads(threads));
    return 0;
}

int cmd_km(const std::string& input) {
    const CensoredSample sample = read_censored_csv_file(input);
    std::cout << km_table_csv(sample);
    return 0;
}

int cmd_power(const std::string& config_path, const std::string& out_dir, unsigned threads) {
    const ExperimentGrid grid = read_grid_config_file(config_path);
    std::filesystem::create_directories(out_dir);

    // restart support: reuse compatible cells from a previous run's output
    const auto cells_path = std::filesystem::path(out_dir) / "power_cells.csv";
    const auto cache = read_cells_long_csv_file(cells_path.string());

    const GridRunReport run = run_grid(grid, threads, cache);
    if (run.reused > 0)
        std::cerr << "resumed " << run.reused << " cell(s) from " << cells_path.string() << '\n';
    for (const auto& failure : run.failures) std::cerr << "warning: " << failure << '\n';

    for (std::size_t n : grid.sample_sizes) {
        for (double fraction : grid.censoring_fractions) {
            const RenderedTable table =
                render_table(run.cells, grid.alternatives, grid.censoring_families,
                             grid.statistics, n, fraction);
            for (const auto& warning : table.warnings) std::cerr << "warning: " << warning << '\n';
            std::ostringstream name;
            name << "power_n" << n << "_c" << static_cast<int>(std::lround(100.0 * fraction))
                 << ".csv";
            std::ofstream csv(std::filesystem::path(out_dir) / name.str());
            csv << table.csv;
            std::cout << table.text << '\n';
        }
    }
    std::ofstream combined(cells_path);
    combined << cells_long_csv(run.cells, grid.alpha, grid.seed);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Goodness-of-fit tests for exponentiality under random right censoring"};
    app.require_subcommand(1);

    std::string input, config_path, out_dir;
    std::vector<std::string> stats;
    std::vector<double> a_values;
    std::uint64_t B = 10000;
    double alpha = 0.05;
    std::uint64_t seed = 1;
    bool json = false;
    unsigned threads = 0;

    auto* test = app.add_subcommand("test", "run the exponentiality tests with bootstrap p-values");
    test->add_option("--input", input, "CSV file with columns time,delta")->required();
    test->add_option("--stats", stats,
                     "statistics to run (KS, CM, CO, EP, L, B, H or e.g. L:0.25); default: the ten "
                     "study configurations")
        ->delimiter(',');
    test->add_option("--a", a_values, "tuning parameters for the selected L/B/H statistics")
        ->delimiter(',');
    test->add_option("--B", B, "bootstrap replications");
    test->add_option("--alpha", alpha, "significance level");
    test->add_option("--seed", seed, "root seed");
    test->add_flag("--json", json, "emit a machine-readable JSON report");
    test->add_option("--threads", threads, "worker threads (0 = hardware)");

    auto* km = app.add_subcommand("km", "print the Kaplan-Meier step function as CSV");
    km->add_option("--input", input, "CSV file with columns time,delta")->required();

    auto* power = app.add_subcommand("power", "run a Monte Carlo power grid");
    power->add_option("--config", config_path, "grid description (JSON)")->required();
    power->add_option("--out", out_dir, "output directory for the table CSVs")->required();
    power->add_option("--threads", threads, "worker threads (0 = hardware)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (test->parsed()) return cmd_test(input, stats, a_values, B, alpha, seed, json, threads);
        if (km->parsed()) return cmd_km(input);
        if (power->parsed()) return cmd_power(config_path, out_dir, threads);
    } catch (const expgof::ParseError& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
    return 0;
}
