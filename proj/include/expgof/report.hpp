// Test reports: the per-statistic bootstrap results for one dataset, with a
// plain-text rendering for people and a JSON rendering for pipelines. The
// JSON is independent of thread count and wall time, so reruns with the same
// seed produce byte-identical reports.
#pragma once

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "expgof/bootstrap.hpp"
#include "expgof/censored_sample.hpp"
#include "expgof/statistics.hpp"

namespace expgof {

struct TestReportEntry {
    StatisticId statistic;
    double observed = 0.0;
    double p_value = 1.0;
    double critical_value = 0.0;
    bool reject = false;
};

struct TestReport {
    std::string dataset;
    std::size_t n = 0;
    std::size_t events = 0;
    double rate_estimate = 0.0;
    double alpha = 0.05;
    std::uint64_t replications = 0;
    std::uint64_t seed = 0;
    std::vector<TestReportEntry> entries;
};

inline TestReport build_test_report(const std::string& dataset, const CensoredSample& sample,
                                    const std::vector<StatisticId>& statistics,
                                    std::uint64_t replications, double alpha, std::uint64_t seed,
                                    unsigned threads = 0) {
    TestReport report;
    report.dataset = dataset;
    report.n = sample.size();
    report.events = sample.event_count();
    report.rate_estimate = estimate_rate(sample);
    report.alpha = alpha;
    report.replications = replications;
    report.seed = seed;

    const auto outcomes = run_bootstrap_many(sample, statistics, replications, alpha, seed, threads);
    for (const auto& outcome : outcomes) {
        TestReportEntry entry;
        entry.statistic = outcome.statistic;
        entry.observed = outcome.observed;
        entry.p_value = outcome.p_value;
        entry.critical_value = outcome.critical_value;
        entry.reject = outcome.p_value <= alpha;
        report.entries.push_back(entry);
    }
    return report;
}

inline std::string report_json(const TestReport& report) {
    nlohmann::ordered_json j;
    j["dataset"] = report.dataset;
    j["n"] = report.n;
    j["events"] = report.events;
    j["rate_estimate"] = report.rate_estimate;
    j["alpha"] = report.alpha;
    j["B"] = report.replications;
    j["seed"] = report.seed;
    j["results"] = nlohmann::ordered_json::array();
    for (const auto& entry : report.entries) {
        nlohmann::ordered_json r;
        r["statistic"] = kind_name(entry.statistic.kind);
        if (entry.statistic.tuning)
            r["a"] = *entry.statistic.tuning;
        else
            r["a"] = nullptr;
        r["observed"] = entry.observed;
        r["p_value"] = entry.p_value;
        r["critical_value"] = entry.critical_value;
        r["reject"] = entry.reject;
        j["results"].push_back(r);
    }
    return j.dump(2) + "\n";
}

inline std::string report_text(const TestReport& report, double wall_seconds, unsigned threads) {
    std::ostringstream out;
    out << "dataset: " << report.dataset << "  (n=" << report.n << ", events=" << report.events
        << ", censored=" << report.n - report.events << ")\n";
    out << "rate estimate: " << std::setprecision(10) << report.rate_estimate << '\n';
    out << "bootstrap: B=" << report.replications << ", alpha=" << report.alpha
        << ", seed=" << report.seed << ", threads=" << threads << '\n';
    out << '\n';
    out << std::left << std::setw(8) << "test" << std::right << std::setw(14) << "observed"
        << std::setw(12) << "p-value" << std::setw(14) << "critical" << "  decision\n";
    for (const auto& entry : report.entries) {
        out << std::left << std::setw(8) << entry.statistic.label() << std::right
            << std::setw(14) << std::setprecision(6) << std::fixed << entry.observed
            << std::setw(12) << std::setprecision(5) << entry.p_value << std::setw(14)
            << std::setprecision(6) << entry.critical_value
            << (entry.reject ? "  reject" : "  fail to reject") << '\n';
        out.unsetf(std::ios::fixed);
    }
    out << '\n' << "wall time: " << std::setprecision(3) << std::fixed << wall_seconds << " s\n";
    out.unsetf(std::ios::fixed);
    return out.str();
}

}  // namespace expgof
