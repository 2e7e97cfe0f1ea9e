#include "dysonclt/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace dysonclt {

namespace {

constexpr std::size_t kPairwiseBase = 32;

}  // namespace

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= kPairwiseBase) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += x[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

double pairwise_sum(const std::vector<double>& x) {
    return pairwise_sum(x.data(), x.size());
}

double sample_mean(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("sample_mean: empty sample");
    return pairwise_sum(x) / static_cast<double>(x.size());
}

CovarianceEstimate covariance_with_jackknife(const std::vector<double>& a,
                                             const std::vector<double>& b) {
    const std::size_t n = a.size();
    if (b.size() != n)
        throw std::invalid_argument("covariance_with_jackknife: length mismatch");
    if (n < 3)
        throw std::invalid_argument("covariance_with_jackknife: need at least 3 samples");

    // Covariance is shift-invariant; anchoring at the first element keeps a
    // constant sample exactly constant after centering (the mean of n copies
    // of a non-representable value rounds) and conditions the general case.
    std::vector<double> da(n), db(n), prod(n);
    for (std::size_t i = 0; i < n; ++i) {
        da[i] = a[i] - a[0];
        db[i] = b[i] - b[0];
    }
    const double mean_a = pairwise_sum(da) / static_cast<double>(n);
    const double mean_b = pairwise_sum(db) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        da[i] -= mean_a;
        db[i] -= mean_b;
        prod[i] = da[i] * db[i];
    }

    // Centered power sums.  sum_a and sum_b are tiny (pure rounding residue)
    // but keeping them makes the leave-one-out algebra exact.
    const double sum_ab = pairwise_sum(prod);
    const double sum_a = pairwise_sum(da);
    const double sum_b = pairwise_sum(db);
    const double nn = static_cast<double>(n);

    CovarianceEstimate out;
    out.value = (sum_ab - sum_a * sum_b / nn) / (nn - 1.0);

    // Leave-one-out estimates from the global sums: dropping sample i shifts
    // the sums by its own contribution, and the residual means absorb the
    // recentring, so each theta_(i) costs O(1).
    std::vector<double> theta(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s_ab = sum_ab - prod[i];
        const double s_a = sum_a - da[i];
        const double s_b = sum_b - db[i];
        theta[i] = (s_ab - s_a * s_b / (nn - 1.0)) / (nn - 2.0);
    }
    const double theta_bar = pairwise_sum(theta) / nn;
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = theta[i] - theta_bar;
        dev[i] = d * d;
    }
    const double var_jack = (nn - 1.0) / nn * pairwise_sum(dev);
    out.std_error = std::sqrt(var_jack);
    return out;
}

namespace {

struct Cumulants34 {
    double k3 = 0.0;
    double k4 = 0.0;
};

// k-statistics from central moments m2..m4 of a sample of size n.
Cumulants34 k_statistics(double m2, double m3, double m4, double n) {
    Cumulants34 out;
    out.k3 = n * n * m3 / ((n - 1.0) * (n - 2.0));
    out.k4 = n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) /
             ((n - 1.0) * (n - 2.0) * (n - 3.0));
    return out;
}

}  // namespace

CumulantEstimate estimate_cumulants(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 5)
        throw std::invalid_argument("estimate_cumulants: need at least 5 samples");

    const double nn = static_cast<double>(n);

    // Shift-invariant like the covariance: anchor at x[0] before centering.
    std::vector<double> d(n), d2(n), d3(n), d4(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - x[0];
    const double mean = pairwise_sum(d) / nn;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] -= mean;
        d2[i] = d[i] * d[i];
        d3[i] = d2[i] * d[i];
        d4[i] = d2[i] * d2[i];
    }
    const double p1 = pairwise_sum(d);
    const double p2 = pairwise_sum(d2);
    const double p3 = pairwise_sum(d3);
    const double p4 = pairwise_sum(d4);

    const Cumulants34 full = k_statistics(p2 / nn, p3 / nn, p4 / nn, nn);

    // Leave-one-out: drop sample i from the centered power sums, recentre by
    // the residual mean mu', and rebuild central moments via the binomial
    // shift identities.
    std::vector<double> theta3(n), theta4(n);
    const double m = nn - 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double q1 = p1 - d[i];
        const double q2 = p2 - d2[i];
        const double q3 = p3 - d3[i];
        const double q4 = p4 - d4[i];
        const double mu = q1 / m;
        const double r2 = q2 / m;
        const double r3 = q3 / m;
        const double r4 = q4 / m;
        const double m2 = r2 - mu * mu;
        const double m3 = r3 - 3.0 * mu * r2 + 2.0 * mu * mu * mu;
        const double m4 = r4 - 4.0 * mu * r3 + 6.0 * mu * mu * r2 - 3.0 * mu * mu * mu * mu;
        const Cumulants34 loo = k_statistics(m2, m3, m4, m);
        theta3[i] = loo.k3;
        theta4[i] = loo.k4;
    }

    const double bar3 = pairwise_sum(theta3) / nn;
    const double bar4 = pairwise_sum(theta4) / nn;
    std::vector<double> dev3(n), dev4(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = theta3[i] - bar3;
        const double b = theta4[i] - bar4;
        dev3[i] = a * a;
        dev4[i] = b * b;
    }

    CumulantEstimate out;
    out.kappa3 = full.k3;
    out.kappa4 = full.k4;
    out.kappa3_stderr = std::sqrt((nn - 1.0) / nn * pairwise_sum(dev3));
    out.kappa4_stderr = std::sqrt((nn - 1.0) / nn * pairwise_sum(dev4));
    return out;
}

}  // namespace dysonclt
