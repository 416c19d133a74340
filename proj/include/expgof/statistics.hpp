// The seven exponentiality test statistics in their closed, easily
// calculable forms, all driven by the Kaplan-Meier jump masses of the scaled
// sample: the characteristic-function statistic EP, the Laplace-transform
// statistics L and B, the characterisation statistic H, and the comparison
// statistics KS, CM and CO.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "expgof/censored_sample.hpp"
#include "expgof/kaplan_meier.hpp"

namespace expgof {

enum class StatisticKind { EP, L, B, H, KS, CM, CO };

// Rejection region of a test: upper tail, both tails, or upper tail in |.|.
enum class RejectionSide { Upper, TwoSided, AbsUpper };

constexpr RejectionSide rejection_side(StatisticKind kind) {
    switch (kind) {
        case StatisticKind::EP: return RejectionSide::AbsUpper;
        case StatisticKind::CO: return RejectionSide::TwoSided;
        default: return RejectionSide::Upper;
    }
}

constexpr bool has_tuning(StatisticKind kind) {
    return kind == StatisticKind::L || kind == StatisticKind::B || kind == StatisticKind::H;
}

constexpr const char* kind_name(StatisticKind kind) {
    switch (kind) {
        case StatisticKind::EP: return "EP";
        case StatisticKind::L: return "L";
        case StatisticKind::B: return "B";
        case StatisticKind::H: return "H";
        case StatisticKind::KS: return "KS";
        case StatisticKind::CM: return "CM";
        case StatisticKind::CO: return "CO";
    }
    return "?";
}

// A statistic together with its tuning parameter a (present exactly for the
// exponentially weighted statistics L, B and H).
struct StatisticId {
    StatisticKind kind;
    std::optional<double> tuning;

    void validate() const {
        if (has_tuning(kind)) {
            if (!tuning || !(*tuning > 0.0))
                throw std::invalid_argument(std::string(kind_name(kind)) +
                                            " requires a tuning parameter a > 0");
        } else if (tuning) {
            throw std::invalid_argument(std::string(kind_name(kind)) +
                                        " does not take a tuning parameter");
        }
    }

    std::string label() const {
        std::string out = kind_name(kind);
        if (tuning) {
            std::string a = std::to_string(*tuning);
            a.erase(a.find_last_not_of('0') + 1);
            if (!a.empty() && a.back() == '.') a.pop_back();
            out += "_" + a;
        }
        return out;
    }
};

inline bool operator==(const StatisticId& lhs, const StatisticId& rhs) {
    return lhs.kind == rhs.kind && lhs.tuning == rhs.tuning;
}

struct StatisticValue {
    StatisticId id;
    double value;
    RejectionSide side;
};

// The ten configurations used throughout the study, in table order.
inline std::vector<StatisticId> default_statistics() {
    return {
        {StatisticKind::KS, std::nullopt}, {StatisticKind::CM, std::nullopt},
        {StatisticKind::CO, std::nullopt}, {StatisticKind::EP, std::nullopt},
        {StatisticKind::L, 0.25},          {StatisticKind::L, 0.5},
        {StatisticKind::B, 0.25},          {StatisticKind::B, 0.5},
        {StatisticKind::H, 0.5},           {StatisticKind::H, 1.0},
    };
}

namespace detail {

// Indices carrying positive jump mass; the double sums run over these only.
inline void support_points(const KmWeights& w, std::vector<double>& ys, std::vector<double>& ms) {
    ys.clear();
    ms.clear();
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (w.jumps[j] > 0.0) {
            ys.push_back(w.ordered_times[j]);
            ms.push_back(w.jumps[j]);
        }
    }
}

inline double ep_value(const KmWeights& w) {
    const double n = static_cast<double>(w.size());
    double lap = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (w.jumps[j] > 0.0) lap += w.jumps[j] * std::exp(-w.ordered_times[j]);
    }
    return std::sqrt(48.0 * n) * (lap - 0.5);
}

inline double l_value(const KmWeights& w, double a) {
    std::vector<double> ys, ms;
    support_points(w, ys, ms);
    const double n = static_cast<double>(w.size());
    const std::size_t m = ys.size();
    double dsum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            const double s = ys[j] + ys[k] + a;
            const double sp1 = s + 1.0;
            dsum += ms[j] * ms[k] * (1.0 + sp1 * sp1) / (s * s * s);
        }
    }
    double single = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double ya = ys[j] + a;
        single += ms[j] * (1.0 + ya) / (ya * ya);
    }
    return n * dsum - 2.0 * n * single + n / a;
}

inline double b_value(const KmWeights& w, double a) {
    std::vector<double> ys, ms;
    support_points(w, ys, ms);
    const double n = static_cast<double>(w.size());
    const std::size_t m = ys.size();
    double dsum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            const double s = ys[j] + ys[k] + a;
            const double s2 = s * s;
            const double yy = ys[j] * ys[k];
            const double kern = (1.0 - ys[j]) * (1.0 - ys[k]) / s -
                                (ys[j] + ys[k]) / s2 + 2.0 * yy / s2 + 2.0 * yy / (s2 * s);
            dsum += ms[j] * ms[k] * kern;
        }
    }
    return n * dsum;
}

inline double h_value(const KmWeights& w, double a) {
    std::vector<double> ys, ms;
    support_points(w, ys, ms);
    const double n = static_cast<double>(w.size());
    const std::size_t m = ys.size();
    const double a2 = a * a;
    double dsum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            const double d2 = (ys[j] - ys[k]) * (ys[j] - ys[k]);
            const double p = ys[j] + ys[k];
            const double p2 = p * p;
            const double qd = a2 + d2;
            const double qp = a2 + p2;
            const double kern = 1.0 / qd - 1.0 / qp - 4.0 * p / (qp * qp) +
                                (2.0 * a2 - 6.0 * d2) / (qd * qd * qd) +
                                (2.0 * a2 - 6.0 * p2) / (qp * qp * qp);
            dsum += ms[j] * ms[k] * kern;
        }
    }
    return 0.5 * a * n * dsum;
}

// sup_{y >= 0} |F~_n(y) - (1 - e^-y)|, realised at the order statistics:
// the upward gap uses F~_n at the point, the downward gap its left limit.
inline double ks_value(const KmWeights& w) {
    double cum = 0.0;
    double best = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double f0 = 1.0 - std::exp(-w.ordered_times[j]);
        best = std::max(best, f0 - cum);
        cum += w.jumps[j];
        best = std::max(best, cum - f0);
    }
    return best;
}

// n * int_0^1 (t - F~_n(F0^-1(t)))^2 dt over the probability scale, summed
// exactly over the segments on which the KM distribution is constant. The
// segment levels are carried by index so that no probability transform has
// to be inverted; tied support points produce zero-length segments that
// contribute nothing.
inline double cm_value(const KmWeights& w) {
    const double n = static_cast<double>(w.size());
    double total = n / 3.0;
    double prev_t = 0.0;
    double level = 0.0;  // KM CDF on [prev_t, next breakpoint)
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (w.jumps[j] <= 0.0) continue;
        const double t = 1.0 - std::exp(-w.ordered_times[j]);
        total += n * level * (t - prev_t) * (level - (t + prev_t));
        level += w.jumps[j];
        prev_t = t;
    }
    total += n * level * (1.0 - prev_t) * (level - (1.0 + prev_t));
    return total;
}

inline double co_value(const std::vector<double>& scaled_times,
                       const std::vector<std::uint8_t>& indicators) {
    double events = 0.0;
    double logs = 0.0;
    double ylogy = 0.0;
    double ysum = 0.0;
    for (std::size_t j = 0; j < scaled_times.size(); ++j) {
        const double y = scaled_times[j];
        if (!(y > 0.0)) throw std::domain_error("nonpositive scaled time");
        const double ly = std::log(y);
        events += indicators[j];
        if (indicators[j]) logs += ly;
        ylogy += y * ly;
        ysum += y;
    }
    return events + logs - events * ylogy / ysum;
}

}  // namespace detail

inline StatisticValue ep_statistic(const ScaledSample&, const KmWeights& w) {
    return {{StatisticKind::EP, std::nullopt}, detail::ep_value(w), RejectionSide::AbsUpper};
}

inline StatisticValue laplace_l_statistic(const ScaledSample&, const KmWeights& w, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("L: tuning parameter a must be positive");
    return {{StatisticKind::L, a}, detail::l_value(w, a), RejectionSide::Upper};
}

inline StatisticValue laplace_b_statistic(const ScaledSample&, const KmWeights& w, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("B: tuning parameter a must be positive");
    return {{StatisticKind::B, a}, detail::b_value(w, a), RejectionSide::Upper};
}

inline StatisticValue cf_h_statistic(const ScaledSample&, const KmWeights& w, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("H: tuning parameter a must be positive");
    return {{StatisticKind::H, a}, detail::h_value(w, a), RejectionSide::Upper};
}

inline StatisticValue ks_statistic(const ScaledSample&, const KmWeights& w) {
    return {{StatisticKind::KS, std::nullopt}, detail::ks_value(w), RejectionSide::Upper};
}

inline StatisticValue cm_statistic(const ScaledSample&, const KmWeights& w) {
    return {{StatisticKind::CM, std::nullopt}, detail::cm_value(w), RejectionSide::Upper};
}

inline StatisticValue co_statistic(const ScaledSample& scaled) {
    return {{StatisticKind::CO, std::nullopt},
            detail::co_value(scaled.scaled_times, scaled.indicators),
            RejectionSide::TwoSided};
}

// Evaluates one statistic from the ordered weights (CO reads the ordered
// pairs, which is equivalent by permutation invariance).
inline double evaluate_statistic(const StatisticId& id, const KmWeights& w) {
    switch (id.kind) {
        case StatisticKind::EP: return detail::ep_value(w);
        case StatisticKind::L: return detail::l_value(w, *id.tuning);
        case StatisticKind::B: return detail::b_value(w, *id.tuning);
        case StatisticKind::H: return detail::h_value(w, *id.tuning);
        case StatisticKind::KS: return detail::ks_value(w);
        case StatisticKind::CM: return detail::cm_value(w);
        case StatisticKind::CO: return detail::co_value(w.ordered_times, w.ordered_indicators);
    }
    throw std::logic_error("unknown statistic kind");
}

inline StatisticValue evaluate_statistic(const StatisticId& id, const ScaledSample& scaled,
                                         const KmWeights& w) {
    if (id.kind == StatisticKind::CO) return co_statistic(scaled);
    return {id, evaluate_statistic(id, w), rejection_side(id.kind)};
}

}  // namespace expgof
