// Orchestrates the Monte Carlo experiment grid: calibrates censoring laws
// per (alternative, family, fraction), runs the warp-speed engine for every
// coordinate, and renders power tables in the study layout (rows are
// alternatives by censoring family, columns are statistics, the per-line
// maximum flagged).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "expgof/bootstrap.hpp"
#include "expgof/distributions.hpp"
#include "expgof/statistics.hpp"

namespace expgof {

struct PowerCellCoord {
    AlternativeSpec alternative;
    CensoringFamily censoring_family = CensoringFamily::Exponential;
    double censoring_fraction = 0.1;
    std::size_t sample_size = 50;
    StatisticId statistic;
};

struct PowerCell {
    PowerCellCoord coord;
    double power_percent = 0.0;
    double std_error = 0.0;  // 100 * sqrt(p(1-p)/mc_reps)
    std::uint64_t mc_reps = 0;
};

struct ExperimentGrid {
    std::vector<std::size_t> sample_sizes;
    std::vector<double> censoring_fractions;
    std::vector<CensoringFamily> censoring_families;
    std::vector<AlternativeSpec> alternatives;
    std::vector<StatisticId> statistics;
    std::uint64_t mc_reps = 5000;
    double alpha = 0.05;
    std::uint64_t seed = 1;
};

// The full study configuration: Table-1 alternatives in table order, all
// three censoring laws, both sample sizes, all three censoring fractions and
// the ten statistic configurations.
inline std::vector<AlternativeSpec> study_alternatives() {
    using AF = AlternativeFamily;
    return {
        {AF::Exponential, 1.0}, {AF::Gamma, 0.6},     {AF::Gamma, 0.8},
        {AF::Gamma, 1.2},       {AF::Weibull, 0.8},   {AF::Weibull, 1.2},
        {AF::Lognormal, 1.0},   {AF::Lognormal, 1.5}, {AF::ChiSquare, 1.0},
        {AF::ChiSquare, 3.0},   {AF::Beta, 1.0, 1.0}, {AF::Beta, 1.0, 0.5},
        {AF::Beta, 1.0, 0.7},   {AF::Beta, 1.5, 1.0},
    };
}

inline ExperimentGrid default_grid() {
    ExperimentGrid grid;
    grid.sample_sizes = {50, 100};
    grid.censoring_fractions = {0.1, 0.2, 0.3};
    grid.censoring_families = {CensoringFamily::Exponential, CensoringFamily::Uniform,
                               CensoringFamily::Lindley};
    grid.alternatives = study_alternatives();
    grid.statistics = default_statistics();
    return grid;
}

inline void validate_grid(const ExperimentGrid& grid) {
    if (grid.sample_sizes.empty() || grid.censoring_fractions.empty() ||
        grid.censoring_families.empty() || grid.alternatives.empty() || grid.statistics.empty())
        throw std::invalid_argument("grid: every dimension needs at least one entry");
    for (std::size_t n : grid.sample_sizes)
        if (n < 2) throw std::invalid_argument("grid: sample sizes must be at least 2");
    for (double f : grid.censoring_fractions)
        if (!(f > 0.0) || !(f < 1.0))
            throw std::invalid_argument("grid: censoring fractions must lie in (0,1)");
    for (CensoringFamily family : grid.censoring_families)
        if (family == CensoringFamily::None)
            throw std::invalid_argument("grid: the 'none' censoring family cannot be calibrated");
    for (const auto& alt : grid.alternatives) alt.validate();
    for (const auto& id : grid.statistics) id.validate();
    if (grid.mc_reps < 100) throw std::invalid_argument("grid: mc_reps must be at least 100");
    if (!(grid.alpha > 0.0) || !(grid.alpha < 1.0))
        throw std::invalid_argument("grid: alpha must lie in (0,1)");
    if (std::floor(static_cast<double>(grid.mc_reps) * (1.0 - grid.alpha)) < 1.0)
        throw std::invalid_argument("grid: floor(mc_reps*(1-alpha)) must be at least 1");
}

namespace detail {

inline std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

// Seed for one (alternative, family, fraction, n) group, derived from the
// coordinate itself so cached cells stay valid under grid recomposition.
inline std::uint64_t group_seed(std::uint64_t root, const AlternativeSpec& alt,
                                CensoringFamily family, double fraction, std::size_t n) {
    std::ostringstream key;
    key << alt.label() << '|' << censoring_family_name(family) << '|' << fraction << "|n=" << n;
    return derive_seed(root, {fnv1a64(key.str())});
}

}  // namespace detail

// A previously computed cell, as reread from the long-format CSV. Cells are
// reusable only when their coordinates, replication count, level and root
// seed all match the current grid, so a cache can never change results.
struct CachedPowerCell {
    std::string alternative;
    std::string family;
    double fraction = 0.0;
    std::size_t sample_size = 0;
    std::string statistic;
    double power_percent = 0.0;
    double std_error = 0.0;
    std::uint64_t mc_reps = 0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
};

struct GridRunReport {
    std::vector<PowerCell> cells;
    std::vector<std::string> failures;  // one message per failed group
    std::size_t reused = 0;             // cells taken from the cache
};

// Runs every grid coordinate. All statistics of one group share a sample
// stream (warp-speed engine); failures are recorded and the run continues.
// Groups whose complete statistic set is present in `cache` (matching
// coordinates, mc_reps, alpha and root seed) are not recomputed.
inline GridRunReport run_grid(const ExperimentGrid& grid, unsigned threads = 0,
                              const std::vector<CachedPowerCell>& cache = {}) {
    validate_grid(grid);
    std::map<std::string, const CachedPowerCell*> cache_by_key;
    for (const auto& cell : cache) {
        if (cell.mc_reps != grid.mc_reps || cell.alpha != grid.alpha || cell.seed != grid.seed)
            continue;
        std::ostringstream key;
        key << cell.alternative << '|' << cell.family << '|' << cell.fraction << '|'
            << cell.sample_size << '|' << cell.statistic;
        cache_by_key[key.str()] = &cell;
    }

    GridRunReport report;
    for (const auto& alt : grid.alternatives) {
        for (CensoringFamily family : grid.censoring_families) {
            for (double fraction : grid.censoring_fractions) {
                std::optional<CensoringSpec> censoring;
                for (std::size_t n : grid.sample_sizes) {
                    // reuse the whole group when every statistic is cached
                    std::vector<const CachedPowerCell*> hits;
                    for (const auto& id : grid.statistics) {
                        std::ostringstream key;
                        key << alt.label() << '|' << censoring_family_name(family) << '|'
                            << fraction << '|' << n << '|' << id.label();
                        const auto it = cache_by_key.find(key.str());
                        if (it == cache_by_key.end()) break;
                        hits.push_back(it->second);
                    }
                    if (hits.size() == grid.statistics.size()) {
                        for (std::size_t s = 0; s < hits.size(); ++s) {
                            PowerCell cell;
                            cell.coord = {alt, family, fraction, n, grid.statistics[s]};
                            cell.power_percent = hits[s]->power_percent;
                            cell.std_error = hits[s]->std_error;
                            cell.mc_reps = hits[s]->mc_reps;
                            report.cells.push_back(cell);
                        }
                        report.reused += hits.size();
                        continue;
                    }

                    if (!censoring) {
                        try {
                            censoring = calibrate_censoring(alt, family, fraction);
                        } catch (const std::exception& ex) {
                            std::ostringstream msg;
                            msg << alt.label() << '/' << censoring_family_name(family) << '/'
                                << fraction << ": calibration failed: " << ex.what();
                            report.failures.push_back(msg.str());
                            break;
                        }
                    }
                    const std::uint64_t seed =
                        detail::group_seed(grid.seed, alt, family, fraction, n);
                    try {
                        const auto powers = warp_speed_powers(alt, *censoring, n, grid.statistics,
                                                              grid.mc_reps, grid.alpha, seed, threads);
                        for (std::size_t s = 0; s < grid.statistics.size(); ++s) {
                            PowerCell cell;
                            cell.coord = {alt, family, fraction, n, grid.statistics[s]};
                            cell.power_percent = powers[s];
                            const double p = powers[s] / 100.0;
                            cell.std_error =
                                100.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(grid.mc_reps));
                            cell.mc_reps = grid.mc_reps;
                            report.cells.push_back(cell);
                        }
                    } catch (const std::exception& ex) {
                        std::ostringstream msg;
                        msg << alt.label() << '/' << censoring_family_name(family) << '/' << fraction
                            << "/n=" << n << ": " << ex.what();
                        report.failures.push_back(msg.str());
                    }
                }
            }
        }
    }
    return report;
}

struct RenderedTable {
    std::string csv;
    std::string text;
    std::vector<std::string> warnings;  // missing cells
};

namespace detail {

// Nearest integer, halves away from zero, as in the reported tables.
inline long long round_half_away(double v) { return static_cast<long long>(std::llround(v)); }

}  // namespace detail

// Renders the (n, fraction) slice: one line per (alternative, censoring
// family) with the statistics as columns, per-line maxima flagged (the CSV
// carries them in a trailing `best` column, the text marks them with '*').
inline RenderedTable render_table(const std::vector<PowerCell>& cells,
                                  const std::vector<AlternativeSpec>& alternatives,
                                  const std::vector<CensoringFamily>& families,
                                  const std::vector<StatisticId>& statistics, std::size_t n,
                                  double fraction) {
    RenderedTable out;
    std::map<std::string, const PowerCell*> by_key;
    for (const auto& cell : cells) {
        if (cell.coord.sample_size != n || cell.coord.censoring_fraction != fraction) continue;
        std::ostringstream key;
        key << cell.coord.alternative.label() << '|'
            << censoring_family_name(cell.coord.censoring_family) << '|'
            << cell.coord.statistic.label();
        by_key[key.str()] = &cell;
    }

    std::ostringstream csv, text;
    csv << "alternative,censoring";
    for (const auto& id : statistics) csv << ',' << id.label();
    csv << ",best\n";

    std::vector<std::string> stat_labels;
    for (const auto& id : statistics) stat_labels.push_back(id.label());
    std::size_t alt_width = std::string("alternative").size();
    for (const auto& alt : alternatives) alt_width = std::max(alt_width, alt.label().size());

    text << "power (%), n=" << n << ", censoring " << detail::round_half_away(100.0 * fraction)
         << "%  ('*' marks the per-line maximum)\n";
    std::ostringstream header;
    header << std::string(alt_width, ' ') << "  " << "censoring   ";
    for (const auto& label : stat_labels) {
        header << ' ';
        header << std::string(label.size() < 7 ? 7 - label.size() : 0, ' ') << label;
    }
    text << header.str() << '\n';

    for (const auto& alt : alternatives) {
        for (CensoringFamily family : families) {
            std::vector<const PowerCell*> line;
            double line_max = -1.0;
            for (const auto& id : statistics) {
                std::ostringstream key;
                key << alt.label() << '|' << censoring_family_name(family) << '|' << id.label();
                auto it = by_key.find(key.str());
                const PowerCell* cell = it == by_key.end() ? nullptr : it->second;
                if (!cell) {
                    out.warnings.push_back("missing cell: " + key.str() + " (n=" +
                                           std::to_string(n) + ")");
                } else {
                    line_max = std::max(line_max, cell->power_percent);
                }
                line.push_back(cell);
            }

            csv << alt.label() << ',' << censoring_family_name(family);
            std::string best;
            text << alt.label() << std::string(alt_width - alt.label().size(), ' ') << "  ";
            std::string fam = censoring_family_name(family);
            text << fam << std::string(fam.size() < 12 ? 12 - fam.size() : 0, ' ');
            for (std::size_t s = 0; s < statistics.size(); ++s) {
                const PowerCell* cell = line[s];
                if (!cell) {
                    csv << ',';
                    text << ' ' << std::string(stat_labels[s].size() < 7 ? 7 : stat_labels[s].size(), ' ');
                    continue;
                }
                const bool is_max = cell->power_percent == line_max;
                csv << ',' << detail::round_half_away(cell->power_percent);
                if (is_max) {
                    if (!best.empty()) best += ';';
                    best += stat_labels[s];
                }
                std::ostringstream val;
                val << detail::round_half_away(cell->power_percent) << (is_max ? "*" : " ");
                const std::size_t width = std::max<std::size_t>(7, stat_labels[s].size());
                std::string v = val.str();
                text << ' ' << std::string(v.size() < width ? width - v.size() : 0, ' ') << v;
            }
            csv << ',' << best << '\n';
            text << '\n';
        }
    }
    out.csv = csv.str();
    out.text = text.str();
    return out;
}

// Long-format CSV over all cells, with standard errors. Carries alpha and
// the root seed so a later run can tell which cells it may reuse.
inline std::string cells_long_csv(const std::vector<PowerCell>& cells, double alpha,
                                  std::uint64_t seed) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "alternative,censoring_family,censoring_fraction,n,statistic,power_percent,std_error,"
           "mc_reps,alpha,seed\n";
    for (const auto& cell : cells) {
        csv << cell.coord.alternative.label() << ','
            << censoring_family_name(cell.coord.censoring_family) << ','
            << cell.coord.censoring_fraction << ',' << cell.coord.sample_size << ','
            << cell.coord.statistic.label() << ',' << cell.power_percent << ',' << cell.std_error
            << ',' << cell.mc_reps << ',' << alpha << ',' << seed << '\n';
    }
    return csv.str();
}

}  // namespace expgof
