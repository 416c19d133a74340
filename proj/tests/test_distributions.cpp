#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "expgof/distributions.hpp"
#include "expgof/power_study.hpp"
#include "expgof/rng.hpp"
#include "support/oracles.hpp"
#include "support/special_functions.hpp"

using namespace expgof;
using namespace expgof::testsupport;

namespace {

constexpr std::size_t kDraws = 100'000;

struct Moments {
    double mean, variance;
};

Moments empirical_moments(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, ss / static_cast<double>(xs.size() - 1)};
}

// Kolmogorov distance between the empirical CDF of xs and cdf.
template <typename Cdf>
double kolmogorov_distance(std::vector<double> xs, Cdf&& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double best = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double f = cdf(xs[j]);
        best = std::max({best, (static_cast<double>(j + 1)) / n - f, f - static_cast<double>(j) / n});
    }
    return best;
}

}  // namespace

TEST_CASE("alternative samplers match their analytic moments") {
    RngStream rng(2468);
    std::vector<double> xs;
    for (const auto& spec : study_alternatives()) {
        sample_alternative(spec, kDraws, rng, xs);
        const auto m = empirical_moments(xs);
        const double mean = alternative_mean(spec);
        const double var = alternative_variance(spec);
        const double se_mean = std::sqrt(var / static_cast<double>(kDraws));
        INFO(spec.label());
        CHECK(std::abs(m.mean - mean) < 5.0 * se_mean);
        // SE of the sample variance from the empirical fourth central moment
        double m4 = 0.0;
        for (double x : xs) {
            const double d = (x - m.mean) * (x - m.mean);
            m4 += d * d;
        }
        m4 /= static_cast<double>(xs.size());
        const double se_var = std::sqrt(
            std::max(0.0, m4 - m.variance * m.variance) / static_cast<double>(xs.size()));
        CHECK(std::abs(m.variance - var) < 5.0 * se_var);
    }
}

TEST_CASE("specific sampler moments") {
    RngStream rng(13579);
    std::vector<double> xs;

    sample_alternative({AlternativeFamily::Exponential, 1.0}, kDraws, rng, xs);
    CHECK(empirical_moments(xs).mean == Catch::Approx(1.0).margin(4.0 / std::sqrt(kDraws)));

    sample_alternative({AlternativeFamily::Gamma, 0.6}, kDraws, rng, xs);
    const auto gm = empirical_moments(xs);
    CHECK(gm.mean == Catch::Approx(0.6).margin(5.0 * std::sqrt(0.6 / kDraws)));
    CHECK(gm.variance == Catch::Approx(0.6).margin(0.03));

    sample_alternative({AlternativeFamily::Beta, 1.0, 0.5}, kDraws, rng, xs);
    CHECK(empirical_moments(xs).mean == Catch::Approx(1.0 / 3.0).margin(0.005));
}

TEST_CASE("censoring samplers match their analytic moments") {
    RngStream rng(97531);
    std::vector<double> cs;

    sample_censoring({CensoringFamily::Uniform, 2.0}, kDraws, rng, cs);
    CHECK(empirical_moments(cs).mean == Catch::Approx(1.0).margin(0.01));

    // Lindley mean (p+2)/(p(p+1))
    sample_censoring({CensoringFamily::Lindley, 1.0}, kDraws, rng, cs);
    CHECK(empirical_moments(cs).mean == Catch::Approx(1.5).margin(0.02));

    sample_censoring({CensoringFamily::None, 0.0}, 10, rng, cs);
    for (double c : cs) CHECK(std::isinf(c));
}

TEST_CASE("empirical CDFs stay within 0.01 Kolmogorov distance of the laws") {
    RngStream rng(86420);
    std::vector<double> xs;
    for (const auto& spec : study_alternatives()) {
        sample_alternative(spec, kDraws, rng, xs);
        INFO(spec.label());
        CHECK(kolmogorov_distance(xs, [&](double x) { return alternative_cdf(spec, x); }) < 0.01);
    }
    for (double p : {0.5, 1.0, 2.0}) {
        sample_censoring({CensoringFamily::Lindley, p}, kDraws, rng, xs);
        INFO("Lindley " << p);
        CHECK(kolmogorov_distance(
                  xs, [&](double x) { return censoring_cdf({CensoringFamily::Lindley, p}, x); }) <
              0.01);
    }
}

TEST_CASE("Lindley mixture matches numerical integration of its density") {
    const double p = 1.3;
    RngStream rng(1122);
    std::vector<double> cs;
    sample_censoring({CensoringFamily::Lindley, p}, kDraws, rng, cs);
    std::sort(cs.begin(), cs.end());
    auto density = [&](double c) {
        return p * p / (p + 1.0) * (1.0 + c) * std::exp(-p * c);
    };
    // cumulative integral of the density along the sorted draws
    const double n = static_cast<double>(cs.size());
    double integral = 0.0, prev = 0.0, dist = 0.0;
    for (std::size_t j = 0; j < cs.size(); ++j) {
        integral += oracle::detail::adaptive_simpson(density, prev, cs[j], 1e-13);
        prev = cs[j];
        dist = std::max({dist, static_cast<double>(j + 1) / n - integral,
                         integral - static_cast<double>(j) / n});
    }
    CHECK(dist < 0.005);
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS((AlternativeSpec{AlternativeFamily::Gamma, -1.0}).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS((AlternativeSpec{AlternativeFamily::Beta, 1.0, 0.0}).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS((CensoringSpec{CensoringFamily::Uniform, 0.0}).validate(),
                    std::invalid_argument);
}

TEST_CASE("exponential-on-exponential calibration has a closed form") {
    const auto c1 = calibrate_censoring({AlternativeFamily::Exponential, 1.0},
                                        CensoringFamily::Exponential, 0.2);
    CHECK(c1.parameter == Catch::Approx(0.25).epsilon(1e-14));
    const auto c2 = calibrate_censoring({AlternativeFamily::Exponential, 1.0},
                                        CensoringFamily::Exponential, 0.1);
    CHECK(c2.parameter == Catch::Approx(1.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("calibration hits the target fraction for bisected families") {
    struct Case {
        AlternativeSpec alt;
        CensoringFamily family;
        double target;
    };
    const Case cases[] = {
        {{AlternativeFamily::Gamma, 0.6}, CensoringFamily::Uniform, 0.1},
        {{AlternativeFamily::Gamma, 0.6}, CensoringFamily::Exponential, 0.2},
        {{AlternativeFamily::Lognormal, 1.5}, CensoringFamily::Lindley, 0.3},
        {{AlternativeFamily::Beta, 1.0, 1.0}, CensoringFamily::Uniform, 0.2},
    };
    for (const auto& c : cases) {
        const auto spec = calibrate_censoring(c.alt, c.family, c.target);
        INFO(c.alt.label() << " / " << censoring_family_name(c.family));

        // independent check with a different stream
        RngStream rng(555000 + static_cast<std::uint64_t>(100 * c.target));
        const std::size_t reps = 1'000'000;
        std::size_t censored = 0;
        for (std::size_t r = 0; r < reps; ++r) {
            const double x = sample_alternative_one(c.alt, rng);
            const double cc = sample_censoring_one(spec, rng);
            censored += x > cc;
        }
        const double achieved = static_cast<double>(censored) / static_cast<double>(reps);
        CHECK(std::abs(achieved - c.target) < 0.005);
    }
}

TEST_CASE("calibration determinism") {
    const auto a = calibrate_censoring({AlternativeFamily::Gamma, 0.8}, CensoringFamily::Lindley, 0.2);
    const auto b = calibrate_censoring({AlternativeFamily::Gamma, 0.8}, CensoringFamily::Lindley, 0.2);
    CHECK(a.parameter == b.parameter);
}

TEST_CASE("calibration rejects unusable targets") {
    CHECK_THROWS_AS(
        calibrate_censoring({AlternativeFamily::Exponential, 1.0}, CensoringFamily::Exponential, 0.0),
        std::invalid_argument);
    CHECK_THROWS_AS(
        calibrate_censoring({AlternativeFamily::Exponential, 1.0}, CensoringFamily::None, 0.1),
        std::invalid_argument);
}
