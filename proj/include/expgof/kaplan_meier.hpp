// Kaplan-Meier product-limit machinery: ordering with the deaths-before-
// withdrawals tie rule, jump masses Delta_j, survival steps, curve
// evaluation, and the reverse estimate for the censoring distribution.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "expgof/censored_sample.hpp"

namespace expgof {

// Ordered observations with their product-limit quantities.
//
// jumps[j] is the mass the estimated lifetime distribution places at
// ordered_times[j]. Censored points carry zero mass except the largest
// observation, which absorbs all residual mass (Efron convention), so the
// jumps always sum to one.
//
// survival_steps[k] = prod_{j<=k} ((n-j-1)/(n-j))^{delta_(j)} (0-based), the
// product-limit survival value on the interval just above ordered_times[k].
struct KmWeights {
    std::vector<double> ordered_times;
    std::vector<std::uint8_t> ordered_indicators;
    std::vector<double> jumps;
    std::vector<double> survival_steps;

    std::size_t size() const { return ordered_times.size(); }
};

// Sort permutation: time ascending, events before censorings at ties,
// original order otherwise (stable).
inline std::vector<std::size_t> sorted_order(const std::vector<double>& times,
                                             const std::vector<std::uint8_t>& indicators) {
    std::vector<std::size_t> order(times.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (times[a] != times[b]) return times[a] < times[b];
        return indicators[a] > indicators[b];
    });
    return order;
}

// Jump masses and survival steps for already-ordered data.
//
// The running product is kept as a product of per-run ratios, where a run is
// a maximal block of consecutive uncensored positions: within a run the
// factors (n-j)/(n-j+1) telescope, so each run contributes a single division.
// Besides cutting rounding error, this makes the complete-sample case exact:
// every jump is computed as one division 1/n.
inline KmWeights km_weights(std::vector<double> ordered_times,
                            std::vector<std::uint8_t> ordered_indicators) {
    const std::size_t n = ordered_times.size();
    if (n != ordered_indicators.size())
        throw std::invalid_argument("km_weights: times and indicators differ in length");
    if (n == 0) throw std::invalid_argument("km_weights: empty data");
    if (!std::is_sorted(ordered_times.begin(), ordered_times.end()))
        throw std::invalid_argument("km_weights: data must be sorted nondecreasing");

    KmWeights w;
    w.jumps.assign(n, 0.0);
    w.survival_steps.assign(n, 0.0);

    double closed_product = 1.0;   // product over completed uncensored runs
    std::size_t run_start = 0;     // 1-based start of the open run; 0 = none
    for (std::size_t pos = 1; pos <= n; ++pos) {
        const bool event = ordered_indicators[pos - 1] != 0;
        const double at_risk = static_cast<double>(n - pos + 1);
        if (pos == n) {
            // Residual mass: S_{n-1} regardless of the last indicator.
            const double prev_survival =
                run_start ? closed_product * (at_risk / static_cast<double>(n - run_start + 1))
                          : closed_product;
            w.jumps[pos - 1] = prev_survival;
        } else if (event) {
            // delta/(n-pos+1) * S_{pos-1}; the open-run numerator cancels the
            // at-risk denominator when the run reaches the previous position.
            w.jumps[pos - 1] = run_start
                                   ? closed_product / static_cast<double>(n - run_start + 1)
                                   : closed_product / at_risk;
        }
        if (event) {
            if (!run_start) run_start = pos;
        } else if (run_start) {
            closed_product *= static_cast<double>(n - pos + 1) / static_cast<double>(n - run_start + 1);
            run_start = 0;
        }
        w.survival_steps[pos - 1] =
            run_start ? closed_product * (static_cast<double>(n - pos) / static_cast<double>(n - run_start + 1))
                      : closed_product;
    }

    w.ordered_times = std::move(ordered_times);
    w.ordered_indicators = std::move(ordered_indicators);
    return w;
}

// Convenience: order a scaled sample by the tie rule and compute its weights.
inline KmWeights km_weights(const ScaledSample& scaled) {
    const auto order = sorted_order(scaled.scaled_times, scaled.indicators);
    std::vector<double> times(order.size());
    std::vector<std::uint8_t> inds(order.size());
    for (std::size_t j = 0; j < order.size(); ++j) {
        times[j] = scaled.scaled_times[order[j]];
        inds[j] = scaled.indicators[order[j]];
    }
    return km_weights(std::move(times), std::move(inds));
}

// Survival curve 1 - F~_n(t) as displayed by the product-limit estimator:
// 1 up to and including the smallest observation, S_{k-1} on
// (T_(k-1), T_(k)], and S_n beyond the largest observation.
inline double km_survival_at(const KmWeights& w, double t) {
    const auto& times = w.ordered_times;
    if (t <= times.front()) return 1.0;
    if (t > times.back()) return w.survival_steps.back();
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    const std::size_t idx = static_cast<std::size_t>(it - times.begin());
    return w.survival_steps[idx - 1];
}

// Reverse Kaplan-Meier weights for the censoring distribution: the same
// construction with the roles of events and censorings exchanged, keeping
// deaths before withdrawals at tied times. Returns nothing when the sample
// contains no censored observation (the estimate would be degenerate; the
// bootstrap then uses C* = +infinity).
inline std::optional<KmWeights> censoring_km_weights(const CensoredSample& sample) {
    bool any_censored = false;
    for (auto d : sample.indicators) any_censored = any_censored || d == 0;
    if (!any_censored) return std::nullopt;

    const auto order = sorted_order(sample.times, sample.indicators);
    std::vector<double> times(order.size());
    std::vector<std::uint8_t> flipped(order.size());
    for (std::size_t j = 0; j < order.size(); ++j) {
        times[j] = sample.times[order[j]];
        flipped[j] = static_cast<std::uint8_t>(1 - sample.indicators[order[j]]);
    }
    return km_weights(std::move(times), std::move(flipped));
}

}  // namespace expgof
