#include <doctest.h>

#include <cmath>

#include "dysonclt/observables.hpp"
#include "dysonclt/rng.hpp"
#include "dysonclt/wigner.hpp"

using namespace dysonclt;

namespace {

Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
    Xoshiro256pp rng(seed);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            m(i, j) = rng.normal();
            m(j, i) = m(i, j);
        }
    return m;
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("eigenvalues of simple matrices") {
    Eigen::MatrixXd d = Eigen::Vector3d(3.0, -1.0, 2.0).asDiagonal();
    const auto s = eigenvalues(d);
    CHECK(s.eigenvalues == std::vector<double>{-1.0, 2.0, 3.0});

    Eigen::MatrixXd flip(2, 2);
    flip << 0, 1, 1, 0;
    const auto f = eigenvalues(flip);
    CHECK(f.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(f.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("trace identities against the dense matrix") {
    const auto m = random_symmetric(5, 31);
    const auto s = eigenvalues(m);
    CHECK(trace_power(s, 1) == doctest::Approx(m.trace()).epsilon(1e-10));
    CHECK(trace_power(s, 2) == doctest::Approx(m.squaredNorm()).epsilon(1e-10));
}

TEST_CASE("trace_power basics and the matrix-cube oracle") {
    Spectrum s{{-1.0, 1.0}};
    CHECK(trace_power(s, 2) == 2.0);
    CHECK(trace_power(Spectrum{{-1.0, 2.0, 3.0}}, 1) == 4.0);

    const auto m = random_symmetric(6, 32);
    const double direct = (m * m * m).trace();
    CHECK(trace_power(eigenvalues(m), 3) ==
          doctest::Approx(direct).epsilon(1e-8 * std::abs(direct)));
}

TEST_CASE("chebyshev recurrence matches cos(k arccos x) on [-1,1]") {
    Xoshiro256pp rng(33);
    for (int k : {1, 2, 3, 4, 7, 12}) {
        for (int i = 0; i < 200; ++i) {
            const double x = 2.0 * rng.uniform01() - 1.0;
            CHECK(chebyshev_T(k, x) ==
                  doctest::Approx(std::cos(k * std::acos(x))).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("chebyshev hyperbolic continuation outside [-1,1]") {
    // T_3(x) = 4x^3 - 3x at x = +-1.5.
    CHECK(chebyshev_T(3, 1.5) == doctest::Approx(9.0).epsilon(1e-13));
    CHECK(chebyshev_T(3, -1.5) == doctest::Approx(-9.0).epsilon(1e-13));
    CHECK(chebyshev_T(2, 2.0) == doctest::Approx(7.0).epsilon(1e-13));
}

TEST_CASE("chebyshev_trace degree 1 is the rescaled trace") {
    const auto s = eigenvalues(random_symmetric(8, 34));
    const double b = 0.8, L = 17.0;
    CHECK(chebyshev_trace(s, 1, b, L) ==
          doctest::Approx(trace_power(s, 1) / (2.0 * std::sqrt(b * L))).epsilon(1e-14));
    CHECK(chebyshev_trace(Spectrum{{0.0}}, 2, 1.0, 5.0) == -1.0);
}

TEST_CASE("height_function counts eigenvalues above the level") {
    const Spectrum s{{-1.0, 0.0, 2.0}};
    const double pref = std::sqrt(M_PI / 2.0);
    CHECK(height_function(s, 1.0, 1) == doctest::Approx(pref).epsilon(1e-15));
    CHECK(height_function(s, -5.0, 1) == doctest::Approx(3 * pref).epsilon(1e-15));
    CHECK(height_function(s, 2.5, 1) == 0.0);
    CHECK(height_function(s, 0.0, 1) == doctest::Approx(2 * pref).epsilon(1e-15));  // ties count
    CHECK(height_function(s, 1.0, 2) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-15));
}

TEST_CASE("height function is a non-increasing step function") {
    const auto s = eigenvalues(random_symmetric(7, 35));
    double prev = height_function(s, -10.0, 1);
    for (double x = -10.0; x <= 10.0; x += 0.05) {
        const double v = height_function(s, x, 1);
        CHECK(v <= prev);
        prev = v;
    }
    // Jump size at a simple eigenvalue is exactly one prefactor.
    const double lambda = s.eigenvalues[3];
    CHECK(height_function(s, lambda, 1) - height_function(s, std::nextafter(lambda, 100.0), 1) ==
          doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-15));
}

TEST_CASE("height moment of a single-sample ensemble vanishes") {
    const std::vector<Spectrum> one = {eigenvalues(random_symmetric(10, 36))};
    const auto r = height_moment_empirical(one, 2, 1.0, 10.0, 3.0, 256, 1);
    CHECK(r.per_sample.size() == 1);
    CHECK(r.per_sample[0] == 0.0);
}

TEST_CASE("mirrored spectra cancel for even k") {
    Spectrum a{{-2.0, -0.5, 1.0, 3.0}};
    Spectrum b{{-3.0, -1.0, 0.5, 2.0}};  // the reflection of a
    const auto r = height_moment_empirical({a, b}, 2, 1.0, 4.0, 3.0, 512, 1);
    CHECK(r.per_sample[0] + r.per_sample[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
}

TEST_CASE("height moments match the trace formula per sample") {
    EntryProcessSpec spec;
    spec.beta = 1;
    spec.covariance = CovarianceFn::constant(1.0);
    const double L = 50.0;
    const auto b = IndexSet::prefix(50);
    std::vector<Spectrum> spectra;
    for (int i = 0; i < 25; ++i)
        spectra.push_back(eigenvalues(submatrix_real(
            sample_ensemble(50, spec, {0.0}, derive_seed(88, static_cast<std::uint64_t>(i))), b, 0)));
    for (int k : {0, 1, 2, 3}) {
        const auto emp = height_moment_empirical(spectra, k, 1.0, L, 3.0, 4096, 1);
        CHECK(!emp.truncated);
        double mean_trace = 0.0;
        for (const auto& s : spectra) mean_trace += trace_power(s, k + 1) / spectra.size();
        for (std::size_t i = 0; i < spectra.size(); ++i) {
            const double via = height_moment_via_traces(spectra[i], mean_trace, k, L, 1);
            CHECK(emp.per_sample[i] == doctest::Approx(via).epsilon(1e-3).scale(1.0 + std::abs(via)));
        }
    }
}

TEST_CASE("height moment via traces, explicit arithmetic") {
    // spectrum {1,-1}, k=1, L=1, beta=1, centered trace: tr X^2 = 2.
    CHECK(height_moment_via_traces(Spectrum{{-1.0, 1.0}}, 0.0, 1, 1.0, 1) ==
          doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-14));
}

TEST_CASE("window validation and truncation reporting") {
    const std::vector<Spectrum> two = {Spectrum{{-1.0, 30.0}}, Spectrum{{-2.0, 1.0}}};
    CHECK_THROWS_AS(height_moment_empirical(two, 1, 1.0, 4.0, 1.0, 64, 1), std::invalid_argument);
    const auto r = height_moment_empirical(two, 1, 1.0, 4.0, 3.5, 64, 1);
    CHECK(r.truncated);  // 30/2 = 15 lies outside [-3.5, 3.5]
}

}  // TEST_SUITE
