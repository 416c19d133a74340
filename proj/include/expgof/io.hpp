// File formats: `time,delta` CSV ingestion with line-accurate errors, the
// Kaplan-Meier step-function table, and the JSON description of a power
// grid.
#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "expgof/censored_sample.hpp"
#include "expgof/kaplan_meier.hpp"
#include "expgof/power_study.hpp"

namespace expgof {

// Input-format problem: message carries "<name>:<line>: <what>".
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

inline double parse_double(const std::string& token, const std::string& where) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &consumed);
    } catch (const std::exception&) {
        throw ParseError(where + ": not a number: '" + token + "'");
    }
    if (consumed != token.size())
        throw ParseError(where + ": trailing characters after number: '" + token + "'");
    return value;
}

}  // namespace detail

// Reads `time,delta` rows (header required, delta in {0,1}).
inline CensoredSample read_censored_csv(std::istream& in, const std::string& name) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError(name + ":1: empty file");
    ++lineno;
    if (detail::trim(line) != "time,delta")
        throw ParseError(name + ":1: expected header 'time,delta', got '" + detail::trim(line) + "'");

    std::vector<double> times;
    std::vector<std::uint8_t> deltas;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string row = detail::trim(line);
        if (row.empty()) continue;
        const std::string where = name + ":" + std::to_string(lineno);
        const std::size_t comma = row.find(',');
        if (comma == std::string::npos) throw ParseError(where + ": expected 'time,delta'");
        const std::string time_tok = detail::trim(row.substr(0, comma));
        const std::string delta_tok = detail::trim(row.substr(comma + 1));
        if (delta_tok.find(',') != std::string::npos)
            throw ParseError(where + ": expected exactly two columns");
        times.push_back(detail::parse_double(time_tok, where));
        if (delta_tok == "0")
            deltas.push_back(0);
        else if (delta_tok == "1")
            deltas.push_back(1);
        else
            throw ParseError(where + ": delta must be 0 or 1, got '" + delta_tok + "'");
    }
    if (times.empty()) throw ParseError(name + ":" + std::to_string(lineno) + ": no data rows");
    return make_censored_sample(std::move(times), std::move(deltas));
}

inline CensoredSample read_censored_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    return read_censored_csv(in, path);
}

// Step-function table of the Kaplan-Meier estimate on the original time
// scale: one row per ordered observation with the post-step survival value
// and the jump mass (the largest observation carries the residual mass).
inline std::string km_table_csv(const CensoredSample& sample) {
    const auto order = sorted_order(sample.times, sample.indicators);
    std::vector<double> times(order.size());
    std::vector<std::uint8_t> deltas(order.size());
    for (std::size_t j = 0; j < order.size(); ++j) {
        times[j] = sample.times[order[j]];
        deltas[j] = sample.indicators[order[j]];
    }
    const KmWeights w = km_weights(std::move(times), std::move(deltas));

    std::ostringstream csv;
    csv << "time,delta,survival,jump\n";
    csv.precision(17);
    for (std::size_t j = 0; j < w.size(); ++j) {
        csv << w.ordered_times[j] << ',' << static_cast<int>(w.ordered_indicators[j]) << ','
            << w.survival_steps[j] << ',' << w.jumps[j] << '\n';
    }
    return csv.str();
}

// --------------------------------------------------------------------------
// Grid configuration (JSON). Every field is optional and defaults to the
// full study configuration; statistics are written "KS", "CO", ... or with a
// tuning suffix "L:0.25".

namespace detail {

inline StatisticId parse_statistic_token(const std::string& token) {
    const std::size_t colon = token.find(':');
    const std::string name = token.substr(0, colon);
    StatisticId id;
    if (name == "KS") id.kind = StatisticKind::KS;
    else if (name == "CM") id.kind = StatisticKind::CM;
    else if (name == "CO") id.kind = StatisticKind::CO;
    else if (name == "EP") id.kind = StatisticKind::EP;
    else if (name == "L") id.kind = StatisticKind::L;
    else if (name == "B") id.kind = StatisticKind::B;
    else if (name == "H") id.kind = StatisticKind::H;
    else throw std::invalid_argument("unknown statistic '" + name + "'");
    if (colon != std::string::npos)
        id.tuning = parse_double(token.substr(colon + 1), "statistic '" + token + "'");
    id.validate();
    return id;
}

inline AlternativeSpec parse_alternative_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("family"))
        throw std::invalid_argument("alternatives: each entry needs a 'family' field");
    const std::string family = j.at("family").get<std::string>();
    AlternativeSpec spec;
    if (family == "exponential") spec.family = AlternativeFamily::Exponential;
    else if (family == "gamma") spec.family = AlternativeFamily::Gamma;
    else if (family == "weibull") spec.family = AlternativeFamily::Weibull;
    else if (family == "lognormal") spec.family = AlternativeFamily::Lognormal;
    else if (family == "chisquare") spec.family = AlternativeFamily::ChiSquare;
    else if (family == "beta") spec.family = AlternativeFamily::Beta;
    else throw std::invalid_argument("alternatives: unknown family '" + family + "'");
    spec.shape = j.value("shape", 1.0);
    spec.second_shape = j.value("second_shape", 0.0);
    spec.validate();
    return spec;
}

inline CensoringFamily parse_censoring_family(const std::string& name) {
    if (name == "exponential") return CensoringFamily::Exponential;
    if (name == "uniform") return CensoringFamily::Uniform;
    if (name == "lindley") return CensoringFamily::Lindley;
    throw std::invalid_argument("censoring_families: unknown family '" + name + "'");
}

}  // namespace detail

// Parses a grid description; any std::exception is rewrapped so the message
// names the offending field.
inline ExperimentGrid parse_grid_config(const std::string& text, const std::string& name) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& ex) {
        throw ParseError(name + ": invalid JSON: " + ex.what());
    }
    if (!j.is_object()) throw ParseError(name + ": top level must be a JSON object");

    static const char* known[] = {"sample_sizes", "censoring_fractions", "censoring_families",
                                  "alternatives", "statistics", "mc_reps", "alpha", "seed"};
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || item.key() == k;
        if (!ok) throw ParseError(name + ": unknown field '" + item.key() + "'");
    }

    ExperimentGrid grid = default_grid();
    auto field = [&](const char* key) { return name + ": field '" + std::string(key) + "'"; };
    try {
        if (j.contains("sample_sizes"))
            grid.sample_sizes = j.at("sample_sizes").get<std::vector<std::size_t>>();
    } catch (const std::exception& ex) {
        throw ParseError(field("sample_sizes") + ": " + ex.what());
    }
    try {
        if (j.contains("censoring_fractions"))
            grid.censoring_fractions = j.at("censoring_fractions").get<std::vector<double>>();
    } catch (const std::exception& ex) {
        throw ParseError(field("censoring_fractions") + ": " + ex.what());
    }
    try {
        if (j.contains("censoring_families")) {
            grid.censoring_families.clear();
            for (const auto& entry : j.at("censoring_families"))
                grid.censoring_families.push_back(
                    detail::parse_censoring_family(entry.get<std::string>()));
        }
    } catch (const std::exception& ex) {
        throw ParseError(field("censoring_families") + ": " + ex.what());
    }
    try {
        if (j.contains("alternatives")) {
            grid.alternatives.clear();
            for (const auto& entry : j.at("alternatives"))
                grid.alternatives.push_back(detail::parse_alternative_json(entry));
        }
    } catch (const std::exception& ex) {
        throw ParseError(field("alternatives") + ": " + ex.what());
    }
    try {
        if (j.contains("statistics")) {
            grid.statistics.clear();
            for (const auto& entry : j.at("statistics"))
                grid.statistics.push_back(detail::parse_statistic_token(entry.get<std::string>()));
        }
    } catch (const std::exception& ex) {
        throw ParseError(field("statistics") + ": " + ex.what());
    }
    try {
        grid.mc_reps = j.value("mc_reps", grid.mc_reps);
        grid.alpha = j.value("alpha", grid.alpha);
        grid.seed = j.value("seed", grid.seed);
    } catch (const std::exception& ex) {
        throw ParseError(name + ": " + ex.what());
    }
    try {
        validate_grid(grid);
    } catch (const std::exception& ex) {
        throw ParseError(name + ": " + ex.what());
    }
    return grid;
}

inline ExperimentGrid read_grid_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_grid_config(buffer.str(), path);
}

// Rereads the long-format cell CSV written by a previous power run, for
// per-cell restarts. Rows that do not parse are skipped rather than fatal: a
// stale or foreign file simply contributes no reusable cells.
inline std::vector<CachedPowerCell> read_cells_long_csv(std::istream& in) {
    std::vector<CachedPowerCell> cells;
    std::string line;
    if (!std::getline(in, line)) return cells;
    while (std::getline(in, line)) {
        const std::string row = detail::trim(line);
        if (row.empty()) continue;
        std::istringstream fields(row);
        std::string tok;
        CachedPowerCell cell;
        try {
            std::getline(fields, cell.alternative, ',');
            std::getline(fields, cell.family, ',');
            std::getline(fields, tok, ',');
            cell.fraction = std::stod(tok);
            std::getline(fields, tok, ',');
            cell.sample_size = static_cast<std::size_t>(std::stoull(tok));
            std::getline(fields, cell.statistic, ',');
            std::getline(fields, tok, ',');
            cell.power_percent = std::stod(tok);
            std::getline(fields, tok, ',');
            cell.std_error = std::stod(tok);
            std::getline(fields, tok, ',');
            cell.mc_reps = std::stoull(tok);
            std::getline(fields, tok, ',');
            cell.alpha = std::stod(tok);
            if (!std::getline(fields, tok, ',')) continue;
            cell.seed = std::stoull(tok);
        } catch (const std::exception&) {
            continue;
        }
        cells.push_back(cell);
    }
    return cells;
}

inline std::vector<CachedPowerCell> read_cells_long_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return {};
    return read_cells_long_csv(in);
}

}  // namespace expgof
