#include <doctest.h>

#include <cmath>
#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tsagent/stats.hpp"

using namespace tsagent;

TEST_CASE("median and MAD definitions on [1..5]") {
    const std::vector<double> xs{1, 2, 3, 4, 5};
    CHECK(stats::median(xs) == 3.0);
    CHECK(stats::mad(xs) == 1.0);
    CHECK(stats::mean(xs) == 3.0);
}

TEST_CASE("median of even-length series averages the middle pair") {
    CHECK(stats::median({4.0, 1.0, 3.0, 2.0}) == 2.5);
}

TEST_CASE("skewness and kurtosis undefined on zero variance") {
    const std::vector<double> xs{2.0, 2.0, 2.0, 2.0};
    CHECK_FALSE(stats::skewness(xs).has_value());
    CHECK_FALSE(stats::excess_kurtosis(xs).has_value());
}

TEST_CASE("percentile interpolates between closest ranks") {
    const std::vector<double> xs{10, 20, 30, 40};
    CHECK(stats::percentile(xs, 0) == 10.0);
    CHECK(stats::percentile(xs, 100) == 40.0);
    CHECK(stats::percentile(xs, 50) == 25.0);
    CHECK(stats::percentile(xs, 25) == doctest::Approx(17.5));
}

TEST_CASE("pearson of identical and negated series") {
    const std::vector<double> a{1, 2, 3, 4};
    std::vector<double> b{-1, -2, -3, -4};
    CHECK(*stats::pearson(a, a) == doctest::Approx(1.0));
    CHECK(*stats::pearson(a, b) == doctest::Approx(-1.0));
    CHECK_FALSE(stats::pearson(a, {1, 1, 1, 1}).has_value());
}

TEST_CASE("ols slope recovers the ramp increment") {
    CHECK(stats::ols_slope(fixtures::ramp(50, 3.0, 0.25)) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("autocorrelation against the direct-formula oracle on [1,2,1,2,1,2]") {
    const std::vector<double> xs{1, 2, 1, 2, 1, 2};
    // Direct autocovariance computation.
    const double m = 1.5;
    double num = 0, den = 0;
    for (std::size_t t = 1; t < xs.size(); ++t) num += (xs[t] - m) * (xs[t - 1] - m);
    for (double v : xs) den += (v - m) * (v - m);
    CHECK(stats::autocorrelation(xs, 1) == doctest::Approx(num / den).epsilon(1e-9));
}

TEST_CASE("dft_top_bins finds the dominant period of a pure sinusoid") {
    const auto xs = fixtures::sinusoid(96, 24.0);
    const auto peaks = stats::dft_top_bins(xs, 3);
    REQUIRE(!peaks.empty());
    CHECK(peaks[0].period_steps == doctest::Approx(24.0));
}

TEST_CASE("permutation entropy basics: monotone and constant are exactly 0") {
    CHECK(stats::permutation_entropy(fixtures::ramp(100), 3, 1) == 0.0);
    CHECK(stats::permutation_entropy(fixtures::constant(100, 7.0), 3, 1) == 0.0);
}

TEST_CASE("permutation entropy of iid uniform noise approaches 1") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> xs(10000);
    for (auto& v : xs) v = dist(rng);
    const double h = stats::permutation_entropy(xs, 3, 1);
    CHECK(h >= 0.95);
    CHECK(h <= 1.0);
    // Brute-force ordinal histogram oracle.
    CHECK(h == doctest::Approx(oracles::histogram_permutation_entropy(xs, 3, 1)).epsilon(1e-12));
}

TEST_CASE("permutation entropy is invariant under strictly monotone transforms") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> xs(200);
        for (auto& v : xs) v = dist(rng);
        const double h = stats::permutation_entropy(xs, 3, 1);

        std::vector<double> exp_xs(xs.size()), cube_xs(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            exp_xs[i] = std::exp(0.5 * xs[i]);
            cube_xs[i] = xs[i] * xs[i] * xs[i] + 2.0 * xs[i];
        }
        CHECK(stats::permutation_entropy(exp_xs, 3, 1) == h);
        CHECK(stats::permutation_entropy(cube_xs, 3, 1) == h);
    }
}

TEST_CASE("permutation entropy agrees with the histogram oracle on random input") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> xs(150);
        for (auto& v : xs) v = dist(rng);
        for (std::size_t m : {2, 3, 4}) {
            const double h = stats::permutation_entropy(xs, m, 1);
            CHECK(h >= 0.0);
            CHECK(h <= 1.0);
            CHECK(h ==
                  doctest::Approx(oracles::histogram_permutation_entropy(xs, m, 1))
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("permutation entropy handles delays above one") {
    // Delay 2 over an alternating series sees only flat-at-distance-2 patterns.
    const std::vector<double> alternating{1, 9, 1, 9, 1, 9, 1, 9, 1, 9, 1, 9};
    CHECK(stats::permutation_entropy(alternating, 3, 2) == 0.0);
    std::mt19937_64 rng(14);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> xs(200);
    for (auto& v : xs) v = dist(rng);
    CHECK(stats::permutation_entropy(xs, 3, 2) ==
          doctest::Approx(oracles::histogram_permutation_entropy(xs, 3, 2)).epsilon(1e-12));
}

TEST_CASE("permutation entropy preconditions") {
    CHECK_THROWS(stats::permutation_entropy({1.0, 2.0}, 3, 1));
    CHECK_THROWS(stats::permutation_entropy(fixtures::ramp(10), 1, 1));
}

TEST_CASE("fnv1a64 digest is stable") {
    CHECK(stats::fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(stats::fnv1a64_hex("a") != stats::fnv1a64_hex("b"));
}
