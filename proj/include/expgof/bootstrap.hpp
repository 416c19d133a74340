// Parametric bootstrap for critical values and p-values. Lifetimes are
// resampled from Exp(lambda_hat) and censoring times from the reverse
// Kaplan-Meier estimate of the censoring distribution; each replicate is
// rescaled by its own rate estimate and fed through the test statistic. A
// warp-speed variant (one replicate per Monte Carlo sample, pooled reference
// distribution) powers the simulation study.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "expgof/censored_sample.hpp"
#include "expgof/distributions.hpp"
#include "expgof/kaplan_meier.hpp"
#include "expgof/parallel.hpp"
#include "expgof/rng.hpp"
#include "expgof/statistics.hpp"

namespace expgof {

// Discrete censoring distribution for resampling: support points with
// cumulative masses, built from reverse-KM weights. When the largest
// observation is an event, the reverse estimate is defective — nothing is
// known about censoring beyond that point — so the residual mass is drawn
// as C* = +infinity rather than clamped onto the largest observation.
// (Clamping makes bootstrap samples of bounded-support data almost entirely
// censored and wrecks the null reference distribution.)
struct CensoringTable {
    std::vector<double> support;
    std::vector<double> cumulative;
    double infinity_mass = 0.0;
};

inline CensoringTable censoring_table(const KmWeights& weights) {
    CensoringTable table;
    const std::size_t n = weights.size();
    double cum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (weights.jumps[j] <= 0.0) continue;
        if (j + 1 == n && weights.ordered_indicators[j] == 0) {
            // residual mass at an observation that is not a censoring event
            table.infinity_mass = weights.jumps[j];
            break;
        }
        cum += weights.jumps[j];
        table.support.push_back(weights.ordered_times[j]);
        table.cumulative.push_back(cum);
    }
    if (!table.cumulative.empty()) table.cumulative.back() = 1.0 - table.infinity_mass;
    return table;
}

// Inverse-CDF draw; exact ties resolve toward the smaller support point and
// draws beyond the observed censoring mass return +infinity.
inline double sample_censoring_time(const CensoringTable& table, RngStream& rng) {
    const double u = rng.uniform01();
    if (table.cumulative.empty() || u > table.cumulative.back())
        return std::numeric_limits<double>::infinity();
    const auto it = std::lower_bound(table.cumulative.begin(), table.cumulative.end(), u);
    const std::size_t idx = std::min(static_cast<std::size_t>(it - table.cumulative.begin()),
                                     table.support.size() - 1);
    return table.support[idx];
}

struct BootstrapConfig {
    StatisticId statistic;
    std::uint64_t replications = 10000;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0 = hardware concurrency

    void validate() const {
        statistic.validate();
        if (replications < 1) throw std::invalid_argument("bootstrap: B must be at least 1");
        if (!(alpha > 0.0) || !(alpha < 1.0))
            throw std::invalid_argument("bootstrap: alpha must lie in (0,1)");
        if (static_cast<std::uint64_t>(std::floor(static_cast<double>(replications) * (1.0 - alpha))) < 1)
            throw std::invalid_argument("bootstrap: floor(B*(1-alpha)) must be at least 1");
    }
};

struct BootstrapOutcome {
    StatisticId statistic;
    double observed = 0.0;
    double critical_value = 0.0;  // order statistic S*_(floor(B(1-alpha)))
    double p_value = 1.0;
    std::vector<double> replicate_values;  // ascending
};

namespace detail {

constexpr std::uint64_t kReplicateTag = 0xB0075741ULL;
constexpr int kMaxRedraws = 1000;

// Scratch space reused across replicates within one worker.
struct ReplicateWorkspace {
    std::vector<double> times;
    std::vector<std::uint8_t> deltas;
    std::vector<std::size_t> order;
    std::vector<double> sorted_times;
    std::vector<std::uint8_t> sorted_deltas;
};

// Draws (T*, delta*) = (min(X*, C*), 1{X* <= C*}) with X* ~ Exp(rate) and
// C* from the censoring table (+infinity when there is none); redraws the
// whole sample while it contains no event.
inline void draw_bootstrap_sample(double rate, const std::optional<CensoringTable>& censoring,
                                  std::size_t n, RngStream& rng, ReplicateWorkspace& ws) {
    ws.times.resize(n);
    ws.deltas.resize(n);
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
        std::size_t events = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double x = rng.exponential(rate);
            const double c = censoring ? sample_censoring_time(*censoring, rng)
                                       : std::numeric_limits<double>::infinity();
            ws.times[j] = std::min(x, c);
            ws.deltas[j] = x <= c ? 1 : 0;
            events += ws.deltas[j];
        }
        if (events > 0) return;
    }
    throw std::runtime_error("bootstrap: 1000 consecutive all-censored replicates");
}

// Scales a raw sample by its own rate estimate, orders it by the tie rule
// and returns the Kaplan-Meier weights of the scaled values.
inline KmWeights weights_of_raw(const std::vector<double>& times,
                                const std::vector<std::uint8_t>& deltas,
                                ReplicateWorkspace& ws) {
    const std::size_t n = times.size();
    double events = 0.0, total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        events += deltas[j];
        total += times[j];
    }
    const double rate = events / total;

    ws.order.resize(n);
    std::iota(ws.order.begin(), ws.order.end(), std::size_t{0});
    std::stable_sort(ws.order.begin(), ws.order.end(), [&](std::size_t a, std::size_t b) {
        if (times[a] != times[b]) return times[a] < times[b];
        return deltas[a] > deltas[b];
    });
    ws.sorted_times.resize(n);
    ws.sorted_deltas.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        ws.sorted_times[j] = times[ws.order[j]] * rate;
        ws.sorted_deltas[j] = deltas[ws.order[j]];
    }
    return km_weights(ws.sorted_times, ws.sorted_deltas);
}

inline double upper_tail_p(double observed, const std::vector<double>& replicates) {
    std::size_t count = 0;
    for (double v : replicates) count += v >= observed;
    return static_cast<double>(count + 1) / static_cast<double>(replicates.size() + 1);
}

}  // namespace detail

// Monte Carlo p-value for the statistic's rejection region:
// upper tail (1 + #{S* >= s}) / (B + 1), the same rule on |.| for EP, and
// twice the smaller tail (capped at one) for the two-sided CO.
inline double bootstrap_p_value(RejectionSide side, double observed,
                                const std::vector<double>& replicates) {
    const double bp1 = static_cast<double>(replicates.size() + 1);
    switch (side) {
        case RejectionSide::Upper:
            return detail::upper_tail_p(observed, replicates);
        case RejectionSide::AbsUpper: {
            std::size_t count = 0;
            for (double v : replicates) count += std::abs(v) >= std::abs(observed);
            return static_cast<double>(count + 1) / bp1;
        }
        case RejectionSide::TwoSided: {
            std::size_t above = 0, below = 0;
            for (double v : replicates) {
                above += v >= observed;
                below += v <= observed;
            }
            const double p_upper = static_cast<double>(above + 1) / bp1;
            const double p_lower = static_cast<double>(below + 1) / bp1;
            return std::min(1.0, 2.0 * std::min(p_lower, p_upper));
        }
    }
    throw std::logic_error("unknown rejection side");
}

// Critical value c_n(alpha) = S*_(floor(B(1-alpha))), 1-indexed on the
// ascending order statistics.
inline double critical_value_floor_rule(const std::vector<double>& sorted_ascending, double alpha) {
    const std::size_t b = sorted_ascending.size();
    const std::size_t rank =
        static_cast<std::size_t>(std::floor(static_cast<double>(b) * (1.0 - alpha)));
    if (rank < 1) throw std::invalid_argument("bootstrap: floor(B*(1-alpha)) must be at least 1");
    return sorted_ascending[rank - 1];
}

// One bootstrap replicate: resample, rescale, evaluate the statistic.
inline StatisticValue bootstrap_replicate(double rate,
                                          const std::optional<CensoringTable>& censoring,
                                          std::size_t n, RngStream& rng, const StatisticId& id) {
    detail::ReplicateWorkspace ws;
    detail::draw_bootstrap_sample(rate, censoring, n, rng, ws);
    const KmWeights w = detail::weights_of_raw(ws.times, ws.deltas, ws);
    return {id, evaluate_statistic(id, w), rejection_side(id.kind)};
}

// Full bootstrap for several statistics at once. All statistics share the
// same B replicate samples (one generation and one KM pass per replicate);
// replicate b draws from the stream derived from (seed, b), so outcomes are
// identical for any thread count.
inline std::vector<BootstrapOutcome> run_bootstrap_many(const CensoredSample& sample,
                                                        const std::vector<StatisticId>& statistics,
                                                        std::uint64_t replications, double alpha,
                                                        std::uint64_t seed, unsigned threads = 0) {
    if (statistics.empty()) return {};
    for (const auto& id : statistics) {
        BootstrapConfig probe{id, replications, alpha, seed, threads};
        probe.validate();
    }

    const double rate = estimate_rate(sample);
    const auto censoring_weights = censoring_km_weights(sample);
    const std::optional<CensoringTable> table =
        censoring_weights ? std::optional<CensoringTable>(censoring_table(*censoring_weights))
                          : std::nullopt;
    const std::size_t n = sample.size();

    const ScaledSample scaled = scale(sample);
    const KmWeights observed_weights = km_weights(scaled);
    std::vector<double> observed(statistics.size());
    for (std::size_t s = 0; s < statistics.size(); ++s)
        observed[s] = evaluate_statistic(statistics[s], scaled, observed_weights).value;

    const std::size_t b_total = static_cast<std::size_t>(replications);
    std::vector<std::vector<double>> replicate_matrix(
        statistics.size(), std::vector<double>(b_total));
    parallel_for_index(b_total, threads, [&](std::size_t b) {
        thread_local detail::ReplicateWorkspace ws;
        RngStream rng = derive_stream(seed, {detail::kReplicateTag, b});
        detail::draw_bootstrap_sample(rate, table, n, rng, ws);
        const KmWeights w = detail::weights_of_raw(ws.times, ws.deltas, ws);
        for (std::size_t s = 0; s < statistics.size(); ++s)
            replicate_matrix[s][b] = evaluate_statistic(statistics[s], w);
    });

    std::vector<BootstrapOutcome> outcomes(statistics.size());
    for (std::size_t s = 0; s < statistics.size(); ++s) {
        BootstrapOutcome& out = outcomes[s];
        out.statistic = statistics[s];
        out.observed = observed[s];
        out.p_value =
            bootstrap_p_value(rejection_side(statistics[s].kind), observed[s], replicate_matrix[s]);
        std::sort(replicate_matrix[s].begin(), replicate_matrix[s].end());
        out.replicate_values = std::move(replicate_matrix[s]);
        out.critical_value = critical_value_floor_rule(out.replicate_values, alpha);
    }
    return outcomes;
}

inline BootstrapOutcome run_bootstrap(const CensoredSample& sample, const BootstrapConfig& cfg) {
    cfg.validate();
    auto outcomes =
        run_bootstrap_many(sample, {cfg.statistic}, cfg.replications, cfg.alpha, cfg.seed, cfg.threads);
    return std::move(outcomes.front());
}

// ---------------------------------------------------------------------------
// Warp-speed Monte Carlo: one bootstrap replicate per generated sample, all
// replicates pooled into a single reference distribution per statistic.

namespace detail {

constexpr std::uint64_t kWarpTag = 0x57415250ULL;

struct WarpDraws {
    std::vector<std::vector<double>> observed;   // [statistic][rep]
    std::vector<std::vector<double>> replicate;  // [statistic][rep]
};

// Generates the Monte Carlo samples and their single bootstrap replicates.
inline WarpDraws warp_speed_draws(const AlternativeSpec& alternative,
                                  const CensoringSpec& censoring, std::size_t n,
                                  const std::vector<StatisticId>& statistics,
                                  std::uint64_t mc_reps, std::uint64_t seed, unsigned threads) {
    WarpDraws draws;
    draws.observed.assign(statistics.size(), std::vector<double>(mc_reps));
    draws.replicate.assign(statistics.size(), std::vector<double>(mc_reps));

    parallel_for_index(static_cast<std::size_t>(mc_reps), threads, [&](std::size_t rep) {
        thread_local ReplicateWorkspace ws;
        thread_local std::vector<double> lifetimes, censor_times;
        RngStream rng = derive_stream(seed, {kWarpTag, rep});

        // Monte Carlo sample from the alternative under the censoring law;
        // redrawn in the (rare) event that every observation is censored.
        std::vector<double>& times = ws.times;
        std::vector<std::uint8_t>& deltas = ws.deltas;
        times.resize(n);
        deltas.resize(n);
        for (int attempt = 0;; ++attempt) {
            if (attempt >= kMaxRedraws)
                throw std::runtime_error("warp-speed: 1000 consecutive all-censored samples");
            lifetimes.resize(n);
            censor_times.resize(n);
            std::size_t events = 0;
            for (std::size_t j = 0; j < n; ++j) {
                lifetimes[j] = sample_alternative_one(alternative, rng);
                censor_times[j] = sample_censoring_one(censoring, rng);
                times[j] = std::min(lifetimes[j], censor_times[j]);
                deltas[j] = lifetimes[j] <= censor_times[j] ? 1 : 0;
                events += deltas[j];
            }
            if (events > 0) break;
        }

        double events = 0.0, total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            events += deltas[j];
            total += times[j];
        }
        const double rate = events / total;

        bool any_censored = false;
        for (std::size_t j = 0; j < n; ++j) any_censored = any_censored || deltas[j] == 0;
        std::optional<CensoringTable> table;
        if (any_censored) {
            CensoredSample observed_sample{times, deltas};
            table = censoring_table(*censoring_km_weights(observed_sample));
        }

        const KmWeights w_obs = weights_of_raw(times, deltas, ws);
        for (std::size_t s = 0; s < statistics.size(); ++s)
            draws.observed[s][rep] = evaluate_statistic(statistics[s], w_obs);

        draw_bootstrap_sample(rate, table, n, rng, ws);
        const KmWeights w_rep = weights_of_raw(ws.times, ws.deltas, ws);
        for (std::size_t s = 0; s < statistics.size(); ++s)
            draws.replicate[s][rep] = evaluate_statistic(statistics[s], w_rep);
    });
    return draws;
}

}  // namespace detail

// Rejection percentages for several statistics sharing one stream of Monte
// Carlo samples. Sample i is rejected when its observed statistic falls
// outside the pooled-replicate quantile for the statistic's rejection side
// (floor-rule order statistics, matching the critical value convention).
inline std::vector<double> warp_speed_powers(const AlternativeSpec& alternative,
                                             const CensoringSpec& censoring, std::size_t n,
                                             const std::vector<StatisticId>& statistics,
                                             std::uint64_t mc_reps, double alpha,
                                             std::uint64_t seed, unsigned threads = 0) {
    alternative.validate();
    censoring.validate();
    for (const auto& id : statistics) id.validate();
    if (mc_reps < 100) throw std::invalid_argument("warp-speed: need at least 100 Monte Carlo reps");

    auto draws =
        detail::warp_speed_draws(alternative, censoring, n, statistics, mc_reps, seed, threads);

    std::vector<double> powers(statistics.size());
    const std::size_t m = static_cast<std::size_t>(mc_reps);
    for (std::size_t s = 0; s < statistics.size(); ++s) {
        std::vector<double>& ref = draws.replicate[s];
        const std::vector<double>& obs = draws.observed[s];
        std::size_t rejections = 0;
        switch (rejection_side(statistics[s].kind)) {
            case RejectionSide::Upper: {
                std::sort(ref.begin(), ref.end());
                const double threshold = critical_value_floor_rule(ref, alpha);
                for (double v : obs) rejections += v > threshold;
                break;
            }
            case RejectionSide::AbsUpper: {
                for (double& v : ref) v = std::abs(v);
                std::sort(ref.begin(), ref.end());
                const double threshold = critical_value_floor_rule(ref, alpha);
                for (double v : obs) rejections += std::abs(v) > threshold;
                break;
            }
            case RejectionSide::TwoSided: {
                std::sort(ref.begin(), ref.end());
                const std::size_t lo_rank = std::max<std::size_t>(
                    1, static_cast<std::size_t>(std::floor(static_cast<double>(m) * alpha / 2.0)));
                const double lo = ref[lo_rank - 1];
                const double hi = critical_value_floor_rule(ref, alpha / 2.0);
                for (double v : obs) rejections += (v < lo) || (v > hi);
                break;
            }
        }
        powers[s] = 100.0 * static_cast<double>(rejections) / static_cast<double>(m);
    }
    return powers;
}

// Single-statistic rejection percentage; identical to the corresponding
// entry of warp_speed_powers because the sample streams do not depend on
// which statistics are evaluated.
inline double warp_speed_power(const AlternativeSpec& alternative, const CensoringSpec& censoring,
                               std::size_t n, const StatisticId& statistic, std::uint64_t mc_reps,
                               double alpha, std::uint64_t seed, unsigned threads = 0) {
    return warp_speed_powers(alternative, censoring, n, {statistic}, mc_reps, alpha, seed,
                             threads)[0];
}

}  // namespace expgof
