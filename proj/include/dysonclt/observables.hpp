#pragma once

#include <Eigen/Dense>
#include <vector>

namespace dysonclt {

// Sorted-ascending real eigenvalues of one symmetric/Hermitian matrix.
struct Spectrum {
    std::vector<double> eigenvalues;
};

Spectrum eigenvalues(const Eigen::MatrixXd& m);
Spectrum eigenvalues(const Eigen::MatrixXcd& m);

// sum_s lambda_s^k.
double trace_power(const Spectrum& spec, int k);

// sum_s T_k(lambda_s / (2 sqrt(b L))): three-term recurrence inside [-1,1],
// hyperbolic continuation sign(x)^k cosh(k arccosh|x|) outside.
double chebyshev_trace(const Spectrum& spec, int k, double b, double L);

// Reference scalar used by chebyshev_trace; exposed for oracle tests.
double chebyshev_T(int k, double x);

// sqrt(beta pi / 2) * #{ lambda_s >= x }; eigenvalues equal to x count.
double height_function(const Spectrum& spec, double x, int beta);

struct HeightMomentResult {
    std::vector<double> per_sample;
    bool truncated = false;  // some eigenvalue fell outside the window
};

// Per-sample k-th moment of the centered height function in the rescaled
// variable: integral over [-x_max, x_max] of x^k (H_i(sqrt(L) x) - Hbar),
// with Hbar the ensemble mean of H on the same nodes.  The quadrature is a
// composite midpoint rule on the n_nodes uniform grid refined by every jump
// location: exact for the step part of the integrand and O(h^2) in the
// polynomial factor, so the integration-by-parts identity is testable to
// far below the 1e-3 tolerance.  (A plain uniform trapezoid rule leaves
// O(h * jump) errors of order 1e-2 at 4096 nodes, which would swamp the
// identity check.)
HeightMomentResult height_moment_empirical(const std::vector<Spectrum>& spectra, int k, double y,
                                           double L, double x_max, int n_nodes, int beta);

// L^{-(k+1)/2} sqrt(beta pi/2) / (k+1) * (tr X^{k+1} - mean_trace), the
// integration-by-parts form of the same moment.
double height_moment_via_traces(const Spectrum& spec, double mean_trace, int k, double L, int beta);

}  // namespace dysonclt
