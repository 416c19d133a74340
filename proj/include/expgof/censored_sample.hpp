// Censored data representations: observed pairs (T_j, delta_j), the maximum
// likelihood rate estimate under exponentiality, and rate-scaled values.
#pragma once

#include <cstddef>
#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace expgof {

// Observed times with event indicators: delta = 1 means the lifetime was
// observed, delta = 0 means it was right censored at the recorded time.
struct CensoredSample {
    std::vector<double> times;
    std::vector<std::uint8_t> indicators;

    std::size_t size() const { return times.size(); }

    std::size_t event_count() const {
        std::size_t events = 0;
        for (auto d : indicators) events += d;
        return events;
    }
};

// Validating constructor; everything downstream assumes these invariants.
inline CensoredSample make_censored_sample(std::vector<double> times,
                                           std::vector<std::uint8_t> indicators) {
    if (times.size() != indicators.size())
        throw std::invalid_argument("censored sample: times and indicators differ in length");
    if (times.size() < 2)
        throw std::invalid_argument("censored sample: need at least 2 observations");
    bool any_event = false;
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (!(times[j] > 0.0) || !std::isfinite(times[j]))
            throw std::invalid_argument("censored sample: time at row " + std::to_string(j + 1) +
                                        " is not a positive finite number");
        if (indicators[j] > 1)
            throw std::invalid_argument("censored sample: indicator at row " + std::to_string(j + 1) +
                                        " must be 0 or 1");
        any_event = any_event || indicators[j] == 1;
    }
    if (!any_event)
        throw std::domain_error("degenerate: no observed events");
    return CensoredSample{std::move(times), std::move(indicators)};
}

// lambda_hat = sum(delta_j) / sum(T_j), the MLE of the exponential rate.
inline double estimate_rate(const CensoredSample& sample) {
    double events = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < sample.size(); ++j) {
        events += sample.indicators[j];
        total += sample.times[j];
    }
    if (events == 0.0)
        throw std::domain_error("degenerate: no observed events");
    return events / total;
}

// Scaled values Y_j = T_j * lambda_hat with their indicators. The statistics
// depend on the data only through these dimensionless pairs.
struct ScaledSample {
    std::vector<double> scaled_times;
    std::vector<std::uint8_t> indicators;
    double rate_estimate = 0.0;

    std::size_t size() const { return scaled_times.size(); }
};

inline ScaledSample scale(const CensoredSample& sample) {
    const double rate = estimate_rate(sample);
    ScaledSample scaled;
    scaled.scaled_times.reserve(sample.size());
    for (double t : sample.times) scaled.scaled_times.push_back(t * rate);
    scaled.indicators = sample.indicators;
    scaled.rate_estimate = rate;
    return scaled;
}

}  // namespace expgof
