// Lifetime alternatives and censoring laws for the Monte Carlo study:
// variate generation for every family in the experiment grid, and bisection
// calibration of censoring parameters to hit a target censoring proportion.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "expgof/rng.hpp"

namespace expgof {

enum class AlternativeFamily { Exponential, Gamma, Weibull, Lognormal, ChiSquare, Beta };

// A lifetime law from the study's alternative table. `shape` is theta;
// `second_shape` is the Beta family's alpha and is ignored elsewhere.
// Parameterizations: Exp(theta) rate theta; Gamma(theta) unit scale;
// Weibull theta x^{theta-1} e^{-x^theta}; Lognormal log-scale sigma = theta;
// chi-square with theta degrees of freedom; Beta(alpha, theta).
struct AlternativeSpec {
    AlternativeFamily family;
    double shape = 1.0;
    double second_shape = 0.0;

    void validate() const {
        if (!(shape > 0.0)) throw std::invalid_argument("alternative: shape must be positive");
        if (family == AlternativeFamily::Beta && !(second_shape > 0.0))
            throw std::invalid_argument("alternative: Beta needs a positive second shape");
    }

    std::string label() const {
        auto num = [](double v) {
            std::string s = std::to_string(v);
            s.erase(s.find_last_not_of('0') + 1);
            if (!s.empty() && s.back() == '.') s.pop_back();
            return s;
        };
        switch (family) {
            case AlternativeFamily::Exponential: return "Exp(" + num(shape) + ")";
            case AlternativeFamily::Gamma: return "Gamma(" + num(shape) + ")";
            case AlternativeFamily::Weibull: return "W(" + num(shape) + ")";
            case AlternativeFamily::Lognormal: return "LN(" + num(shape) + ")";
            case AlternativeFamily::ChiSquare: return "ChiSq(" + num(shape) + ")";
            case AlternativeFamily::Beta: return "Beta(" + num(second_shape) + "," + num(shape) + ")";
        }
        return "?";
    }
};

inline double sample_alternative_one(const AlternativeSpec& spec, RngStream& rng) {
    switch (spec.family) {
        case AlternativeFamily::Exponential:
            return rng.exponential(spec.shape);
        case AlternativeFamily::Gamma:
            return rng.gamma(spec.shape);
        case AlternativeFamily::Weibull:
            return std::pow(-std::log(rng.uniform_pos()), 1.0 / spec.shape);
        case AlternativeFamily::Lognormal:
            return std::exp(spec.shape * rng.normal01());
        case AlternativeFamily::ChiSquare:
            return 2.0 * rng.gamma(0.5 * spec.shape);
        case AlternativeFamily::Beta: {
            const double x = rng.gamma(spec.second_shape);
            const double y = rng.gamma(spec.shape);
            return x / (x + y);
        }
    }
    throw std::logic_error("unknown alternative family");
}

inline void sample_alternative(const AlternativeSpec& spec, std::size_t n, RngStream& rng,
                               std::vector<double>& out) {
    spec.validate();
    out.resize(n);
    for (auto& x : out) x = sample_alternative_one(spec, rng);
}

enum class CensoringFamily { Exponential, Uniform, Lindley, None };

constexpr const char* censoring_family_name(CensoringFamily family) {
    switch (family) {
        case CensoringFamily::Exponential: return "exponential";
        case CensoringFamily::Uniform: return "uniform";
        case CensoringFamily::Lindley: return "lindley";
        case CensoringFamily::None: return "none";
    }
    return "?";
}

// A censoring law: Exp(rate), Uniform(0, b), one-parameter Lindley(p), or no
// censoring at all (C = +infinity).
struct CensoringSpec {
    CensoringFamily family = CensoringFamily::None;
    double parameter = 0.0;

    void validate() const {
        if (family != CensoringFamily::None && !(parameter > 0.0))
            throw std::invalid_argument("censoring: parameter must be positive");
    }
};

// Lindley(p) draws via the mixture representation: Exp(p) with probability
// p/(p+1), otherwise the sum of two Exp(p) variates (Gamma(2, rate p)).
inline double sample_lindley(double p, RngStream& rng) {
    if (rng.uniform01() < p / (p + 1.0)) return rng.exponential(p);
    return rng.exponential(p) + rng.exponential(p);
}

inline double sample_censoring_one(const CensoringSpec& spec, RngStream& rng) {
    switch (spec.family) {
        case CensoringFamily::Exponential: return rng.exponential(spec.parameter);
        case CensoringFamily::Uniform: return spec.parameter * rng.uniform01();
        case CensoringFamily::Lindley: return sample_lindley(spec.parameter, rng);
        case CensoringFamily::None: return std::numeric_limits<double>::infinity();
    }
    throw std::logic_error("unknown censoring family");
}

inline void sample_censoring(const CensoringSpec& spec, std::size_t n, RngStream& rng,
                             std::vector<double>& out) {
    spec.validate();
    out.resize(n);
    for (auto& c : out) c = sample_censoring_one(spec, rng);
}

// P(C <= x) for the censoring laws; used by the calibration below.
inline double censoring_cdf(const CensoringSpec& spec, double x) {
    if (x <= 0.0) return 0.0;
    switch (spec.family) {
        case CensoringFamily::Exponential:
            return -std::expm1(-spec.parameter * x);
        case CensoringFamily::Uniform:
            return x >= spec.parameter ? 1.0 : x / spec.parameter;
        case CensoringFamily::Lindley: {
            const double p = spec.parameter;
            return 1.0 - (1.0 + p * x / (p + 1.0)) * std::exp(-p * x);
        }
        case CensoringFamily::None:
            return 0.0;
    }
    throw std::logic_error("unknown censoring family");
}

namespace detail {

// Fixed seed for the calibration draws, so calibrated parameters (and hence
// whole power tables) are reproducible end to end.
constexpr std::uint64_t kCalibrationSeed = 0x63616C6962726174ULL;
constexpr std::size_t kCalibrationDraws = 1'000'000;

// Censoring proportion P(X > C) = E[ P(C < X | X) ] for a fixed set of
// lifetime draws; a smooth monotone function of the censoring parameter.
inline double censored_fraction(const std::vector<double>& lifetimes, const CensoringSpec& spec) {
    double acc = 0.0;
    for (double x : lifetimes) acc += censoring_cdf(spec, x);
    return acc / static_cast<double>(lifetimes.size());
}

}  // namespace detail

// Finds the censoring parameter for which P(X > C) equals target_fraction,
// where X follows the given alternative. Exponential lifetimes with
// exponential censoring admit the closed form P = r/(theta + r); the other
// combinations are solved by bisection against a million fixed-seed lifetime
// draws.
inline CensoringSpec calibrate_censoring(const AlternativeSpec& alternative,
                                         CensoringFamily family, double target_fraction) {
    alternative.validate();
    if (!(target_fraction > 0.0) || !(target_fraction < 1.0))
        throw std::invalid_argument("calibrate_censoring: target fraction must lie in (0,1)");
    if (family == CensoringFamily::None)
        throw std::invalid_argument("calibrate_censoring: cannot calibrate the 'none' family");

    if (family == CensoringFamily::Exponential &&
        alternative.family == AlternativeFamily::Exponential) {
        return {family, alternative.shape * target_fraction / (1.0 - target_fraction)};
    }

    RngStream rng(derive_seed(detail::kCalibrationSeed,
                              {static_cast<std::uint64_t>(alternative.family),
                               static_cast<std::uint64_t>(alternative.shape * 4096.0),
                               static_cast<std::uint64_t>(alternative.second_shape * 4096.0)}));
    std::vector<double> lifetimes;
    sample_alternative(alternative, detail::kCalibrationDraws, rng, lifetimes);

    // Fraction is increasing in the parameter for Exponential/Lindley
    // (larger rate -> earlier censoring) and decreasing for Uniform.
    const bool increasing = family != CensoringFamily::Uniform;
    auto fraction_at = [&](double param) {
        const double f = detail::censored_fraction(lifetimes, {family, param});
        return increasing ? f : 1.0 - f;  // monotone increasing view
    };
    const double want = increasing ? target_fraction : 1.0 - target_fraction;

    double lo = 1e-9, hi = 1e9;
    if (fraction_at(lo) > want || fraction_at(hi) < want) {
        throw std::domain_error("calibrate_censoring: target " + std::to_string(target_fraction) +
                                " not bracketed on parameter range [1e-9, 1e9] (endpoint fractions " +
                                std::to_string(detail::censored_fraction(lifetimes, {family, lo})) + ", " +
                                std::to_string(detail::censored_fraction(lifetimes, {family, hi})) + ")");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (fraction_at(mid) < want)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-10 * std::max(1.0, hi)) break;
    }
    return {family, 0.5 * (lo + hi)};
}

}  // namespace expgof
