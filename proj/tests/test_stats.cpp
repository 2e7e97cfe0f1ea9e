#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dysonclt/rng.hpp"
#include "dysonclt/stats.hpp"

using namespace dysonclt;

namespace {

// Correlated Gaussian triple with known covariance: X = g1, Y = 0.6 g1 +
// 0.8 g2, Z = g2, so Cov = [[1, .6, 0], [.6, 1, .8], [0, .8, 1]].
struct Triple {
    std::vector<double> x, y, z;
};

Triple gaussian_triple(std::size_t n, std::uint64_t seed) {
    Xoshiro256pp rng(seed);
    Triple out;
    out.x.resize(n);
    out.y.resize(n);
    out.z.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double g1 = rng.normal();
        const double g2 = rng.normal();
        out.x[i] = g1;
        out.y[i] = 0.6 * g1 + 0.8 * g2;
        out.z[i] = g2;
    }
    return out;
}

void check_within(const CovarianceEstimate& est, double target) {
    CHECK(est.std_error > 0.0);
    CHECK(std::abs(est.value - target) <= 5.0 * est.std_error);
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("pairwise_sum agrees with sequential summation and is exact on integers") {
    std::vector<double> v(1000);
    std::iota(v.begin(), v.end(), 1.0);
    CHECK(pairwise_sum(v) == 500500.0);  // integers below 2^53: no rounding at all

    Xoshiro256pp rng(3);
    std::vector<double> r(257);
    for (double& x : r) x = rng.normal();
    const double naive = std::accumulate(r.begin(), r.end(), 0.0);
    CHECK(pairwise_sum(r) == doctest::Approx(naive).epsilon(1e-13));
    CHECK(pairwise_sum(r) == pairwise_sum(r));  // bitwise stable

    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
    CHECK(sample_mean({2.0, 4.0}) == 3.0);
    CHECK_THROWS_AS(sample_mean({}), std::invalid_argument);
}

TEST_CASE("covariance on a hand-computable sample is exact") {
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> b{2.0, 4.0, 6.0, 8.0};
    const CovarianceEstimate est = covariance_with_jackknife(a, b);
    // deviations (-1.5,-.5,.5,1.5) x (-3,-1,1,3): sum of products 10, n-1 = 3
    CHECK(est.value == doctest::Approx(10.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("covariance estimator reproduces a known Gaussian covariance within 5 stderr") {
    const Triple t = gaussian_triple(10'000, 41);
    check_within(covariance_with_jackknife(t.x, t.x), 1.0);
    check_within(covariance_with_jackknife(t.y, t.y), 1.0);
    check_within(covariance_with_jackknife(t.z, t.z), 1.0);
    check_within(covariance_with_jackknife(t.x, t.y), 0.6);
    check_within(covariance_with_jackknife(t.y, t.z), 0.8);
    check_within(covariance_with_jackknife(t.x, t.z), 0.0);
}

TEST_CASE("covariance is symmetric in its arguments") {
    const Triple t = gaussian_triple(501, 42);
    const CovarianceEstimate ab = covariance_with_jackknife(t.x, t.y);
    const CovarianceEstimate ba = covariance_with_jackknife(t.y, t.x);
    CHECK(ab.value == ba.value);
    CHECK(ab.std_error == ba.std_error);
}

TEST_CASE("jackknife stderr shrinks like 1/sqrt(2) when the sample doubles") {
    // Same pipeline, doubled n; the ratio should be sqrt(2) within 20%.
    const Triple small = gaussian_triple(4000, 43);
    const Triple big = gaussian_triple(8000, 43);
    const double se_small = covariance_with_jackknife(small.x, small.y).std_error;
    const double se_big = covariance_with_jackknife(big.x, big.y).std_error;
    const double ratio = se_small / se_big;
    CHECK(ratio > std::sqrt(2.0) * 0.8);
    CHECK(ratio < std::sqrt(2.0) * 1.2);
}

TEST_CASE("cumulants of synthetic Gaussian draws vanish within 5 stderr") {
    Xoshiro256pp rng(44);
    std::vector<double> x(100'000);
    for (double& v : x) v = rng.normal();
    const CumulantEstimate est = estimate_cumulants(x);
    CHECK(est.kappa3_stderr > 0.0);
    CHECK(est.kappa4_stderr > 0.0);
    CHECK(std::abs(est.kappa3) <= 5.0 * est.kappa3_stderr);
    CHECK(std::abs(est.kappa4) <= 5.0 * est.kappa4_stderr);
}

TEST_CASE("cumulants of centered Exp(1) draws match kappa3 = 2, kappa4 = 6") {
    Xoshiro256pp rng(45);
    std::vector<double> x(100'000);
    for (double& v : x) v = -std::log(rng.uniform01()) - 1.0;
    const CumulantEstimate est = estimate_cumulants(x);
    CHECK(std::abs(est.kappa3 - 2.0) <= 5.0 * est.kappa3_stderr);
    CHECK(std::abs(est.kappa4 - 6.0) <= 5.0 * est.kappa4_stderr);
}

TEST_CASE("cumulants of a constant sample are exactly zero") {
    const std::vector<double> x(1000, 7.3);
    const CumulantEstimate est = estimate_cumulants(x);
    CHECK(est.kappa3 == 0.0);
    CHECK(est.kappa4 == 0.0);
    CHECK(est.kappa3_stderr == 0.0);
    CHECK(est.kappa4_stderr == 0.0);
}

TEST_CASE("estimators reject degenerate sample sizes") {
    const std::vector<double> four{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> two{1.0, 2.0};
    CHECK_THROWS_AS(covariance_with_jackknife(two, two), std::invalid_argument);
    CHECK_THROWS_AS(covariance_with_jackknife(four, two), std::invalid_argument);
    CHECK_THROWS_AS(estimate_cumulants(four), std::invalid_argument);
}

}  // TEST_SUITE
