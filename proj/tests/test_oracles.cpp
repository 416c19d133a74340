#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "expgof/censored_sample.hpp"
#include "expgof/kaplan_meier.hpp"
#include "expgof/statistics.hpp"
#include "support/oracles.hpp"
#include "support/random_samples.hpp"

using namespace expgof;

TEST_CASE("quadrature spec validation") {
    oracle::QuadratureSpec spec{480.0, 1200, 1e-9};
    CHECK_NOTHROW(spec.validate(0.25));
    spec.upper_cutoff = 10.0;
    CHECK_THROWS_AS(spec.validate(0.25), std::invalid_argument);
}

TEST_CASE("EP oracle recovers the closed form") {
    SECTION("complete sample") {
        const std::vector<double> y = {0.3, 0.7, 1.1, 1.9, 3.0};
        const auto scaled = ScaledSample{y, std::vector<std::uint8_t>(5, 1), 1.0};
        const auto w = km_weights(scaled);
        const auto quad = oracle::quad_ep_full(w);
        CHECK(quad.value == Catch::Approx(ep_statistic(scaled, w).value).epsilon(1e-5));
        CHECK(std::abs(quad.imaginary) < 1e-8);
    }
    SECTION("censored sample") {
        RngStream rng(99);
        const auto sample = testsupport::random_censored_sample(rng, {20, 20, 0.4, 5e-3});
        const auto scaled = scale(sample);
        const auto w = km_weights(scaled);
        CHECK(oracle::quad_ep(w) ==
              Catch::Approx(ep_statistic(scaled, w).value).epsilon(1e-8).margin(1e-9));
    }
}

TEST_CASE("doubling the panel count moves the oracles less than the tolerance") {
    RngStream rng(3);
    const auto sample = testsupport::random_censored_sample(rng, {10, 20, 0.4, 5e-3});
    const auto w = km_weights(scale(sample));

    CHECK(std::abs(oracle::quad_l(w, 0.5, 1.0) - oracle::quad_l(w, 0.5, 2.0)) < 1e-9);
    CHECK(std::abs(oracle::quad_b(w, 0.5, 1.0) - oracle::quad_b(w, 0.5, 2.0)) < 1e-9);
    CHECK(std::abs(oracle::quad_h(w, 0.5, 1.0) - oracle::quad_h(w, 0.5, 2.0)) < 1e-9);
    CHECK(std::abs(oracle::quad_ep_full(w, 1.0).value - oracle::quad_ep_full(w, 2.0).value) < 1e-9);
}

TEST_CASE("oracles and closed forms agree on a near-tie sample") {
    const double y0 = 0.8;
    std::vector<double> y = {0.2, y0, y0 * (1.0 + 1e-12), 1.7};
    std::vector<std::uint8_t> d = {1, 1, 0, 1};
    const auto scaled = ScaledSample{y, d, 1.0};
    const auto w = km_weights(scaled);
    CHECK(oracle::quad_ep(w) == Catch::Approx(ep_statistic(scaled, w).value).margin(1e-5));
    CHECK(oracle::quad_l(w, 0.5) ==
          Catch::Approx(laplace_l_statistic(scaled, w, 0.5).value).epsilon(1e-5));
    CHECK(oracle::quad_h(w, 0.5) ==
          Catch::Approx(cf_h_statistic(scaled, w, 0.5).value).epsilon(1e-5));
    CHECK(oracle::grid_ks(w) == Catch::Approx(ks_statistic(scaled, w).value).margin(1e-9));
}

TEST_CASE("uniform weights are a special case the oracles handle") {
    const std::vector<double> y = {0.25, 0.5, 1.0, 2.0, 4.0};
    const auto scaled = ScaledSample{y, std::vector<std::uint8_t>(5, 1), 1.0};
    const auto w = km_weights(scaled);
    CHECK(oracle::quad_l(w, 1.0) ==
          Catch::Approx(laplace_l_statistic(scaled, w, 1.0).value).epsilon(1e-8));
    CHECK(oracle::quad_cm(w) == Catch::Approx(cm_statistic(scaled, w).value).margin(1e-9));
}
