#pragma once

#include <cstddef>
#include <vector>

namespace dysonclt {

// Deterministic tree summation: the result depends only on the data and its
// order, never on threading, and carries O(log n) rounding growth.
double pairwise_sum(const double* x, std::size_t n);
double pairwise_sum(const std::vector<double>& x);
double sample_mean(const std::vector<double>& x);

struct CovarianceEstimate {
    double value = 0.0;      // unbiased sample covariance (divisor n-1)
    double std_error = 0.0;  // leave-one-out jackknife
};

// Unbiased sample covariance of two coordinates with jackknife standard
// error; the leave-one-out estimates are recovered in O(1) each from global
// centered power sums.  Needs n >= 3.
CovarianceEstimate covariance_with_jackknife(const std::vector<double>& a,
                                             const std::vector<double>& b);

struct CumulantEstimate {
    double kappa3 = 0.0;
    double kappa3_stderr = 0.0;
    double kappa4 = 0.0;  // excess: the fourth cumulant, zero for a Gaussian
    double kappa4_stderr = 0.0;
};

// k-statistics (unbiased cumulant estimators) for the third and fourth
// cumulants, with jackknife standard errors.  Needs n >= 5.
CumulantEstimate estimate_cumulants(const std::vector<double>& x);

}  // namespace dysonclt
