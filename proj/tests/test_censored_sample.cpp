#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "expgof/censored_sample.hpp"
#include "expgof/io.hpp"
#include "support/random_samples.hpp"

using namespace expgof;

static CensoredSample leukemia() {
    return read_censored_csv_file(std::string(EXPGOF_SOURCE_DIR) + "/data/leukemia.csv");
}

TEST_CASE("rate estimate is events over total time") {
    CHECK(estimate_rate(make_censored_sample({1, 1, 1, 1}, {1, 1, 1, 1})) == 1.0);
    CHECK(estimate_rate(make_censored_sample({2, 2}, {1, 0})) == 0.25);
}

TEST_CASE("all-censored samples are rejected") {
    CHECK_THROWS_WITH(make_censored_sample({1, 2}, {0, 0}), "degenerate: no observed events");
}

TEST_CASE("sample validation") {
    CHECK_THROWS_AS(make_censored_sample({1.0}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(make_censored_sample({1.0, -2.0}, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(make_censored_sample({1.0, 0.0}, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(make_censored_sample({1.0, 2.0}, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(make_censored_sample({1.0, 2.0, 3.0}, {1, 1}), std::invalid_argument);
}

TEST_CASE("scaling multiplies times by the rate estimate and keeps pairing") {
    const auto scaled = scale(make_censored_sample({1, 2, 3}, {1, 1, 1}));
    CHECK(scaled.rate_estimate == 0.5);
    CHECK(scaled.scaled_times == std::vector<double>{0.5, 1.0, 1.5});
    CHECK(scaled.indicators == std::vector<std::uint8_t>{1, 1, 1});
}

TEST_CASE("scaled values are invariant under a change of time unit") {
    for (double c : {1e-3, 7.0, 1e3}) {
        const auto base = scale(make_censored_sample({1, 2, 3}, {1, 1, 1}));
        const auto rescaled = scale(make_censored_sample({c * 1, c * 2, c * 3}, {1, 1, 1}));
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(rescaled.scaled_times[j] == Catch::Approx(base.scaled_times[j]).epsilon(1e-14));
    }
}

TEST_CASE("leukemia transcription checksums") {
    const auto sample = leukemia();
    REQUIRE(sample.size() == 66);
    CHECK(sample.event_count() == 52);

    double total = 0.0, censored_total = 0.0;
    for (std::size_t j = 0; j < sample.size(); ++j) {
        total += sample.times[j];
        if (sample.indicators[j] == 0) censored_total += sample.times[j];
    }
    CHECK(total == 5236.0);
    CHECK(censored_total == 2547.0);
    CHECK(estimate_rate(sample) == 52.0 / 5236.0);

    const auto scaled = scale(sample);
    for (std::size_t j = 0; j < sample.size(); ++j)
        CHECK(scaled.scaled_times[j] == sample.times[j] * (52.0 / 5236.0));
}
