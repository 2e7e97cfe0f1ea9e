#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace dysonclt {

using BigInt = boost::multiprecision::cpp_int;

// Limiting-covariance query for one pair of centered trace statistics:
// degrees (k_p, k_q), submatrix density fractions (b_p, b_q), overlap
// fraction b_pq, entry-process correlation c = c(t_p, t_q), and beta.
struct CovarianceQuery {
    int k_p = 1;
    int k_q = 1;
    double b_p = 1.0;
    double b_q = 1.0;
    double b_pq = 1.0;
    double c = 1.0;
    int beta = 1;

    void validate() const;
    CovarianceQuery swapped() const { return {k_q, k_p, b_q, b_p, b_pq, c, beta}; }
};

struct QuadratureParams {
    int n_nodes = 512;          // angular nodes per contour
    double radius_shrink = 0.25;  // inner-contour shrink factor (0, 0.5)

    void validate() const;
};

// Exact binomial coefficient; zero for k outside [0, n].
BigInt binomial(int n, int k);

// n-th Catalan number, exact; n must lie in [0, 64].
BigInt catalan(int n);

// sum over (s_1,...,s_r) >= 0 with sum S of prod C_{s_i}, via the closed form
// binom(2S+r, S) * r / (2S+r); the division is exact and asserted.
BigInt catalan_convolution(int r, int S);

// The Catalan/binomial series: (2/beta) * sum_{r>=1} r binom(k_p,(k_p-r)/2)
// binom(k_q,(k_q-r)/2) (c b_pq)^r b_p^{(k_p-r)/2} b_q^{(k_q-r)/2}.  Binomials
// with a non-integer or out-of-range lower index vanish, so the sum is the
// finite, parity-matched range r <= min(k_p, k_q).
double covariance_series(const CovarianceQuery& q);

// The equivalent double contour integral, evaluated by the trapezoid rule in
// the angle over |z| = sqrt(b_p)(1-delta), |w| = sqrt(b_q).
double covariance_contour(const CovarianceQuery& q, const QuadratureParams& quad = {});

// The equivalent log-kernel double integral over the upper semicircles
// |z|^2 = b_p, |w|^2 = b_q.  The kernel splits exactly into rotation-invariant
// factors ln|rho - e^{i(theta+phi)}| - ln|rho - e^{i(theta-phi)}| with
// rho = c b_pq / sqrt(b_p b_q), so each part is integrated as (smooth inner
// Gauss-Legendre correlation) x (outer composite Gauss-Legendre on panels
// geometrically graded into the log singularity).  Returns exact 0 when
// k_p + k_q is odd.
double covariance_logkernel(const CovarianceQuery& q, const QuadratureParams& quad = {});

// delta_{k_p k_q} (k_p / 2 beta) (c b_pq / sqrt(b_p b_q))^{k_p}.
double chebyshev_covariance_closed(int k_p, int k_q, double b_p, double b_q, double b_pq, double c,
                                   int beta);

// Cross-check of the closed form: expand T_k in monomials (exact integer
// coefficients) and apply bilinearity of the limiting covariance over
// covariance_series; constant terms drop under centering.
double chebyshev_covariance_expanded(int k_p, int k_q, double b_p, double b_q, double b_pq,
                                     double c, int beta);

// Monomial coefficients of T_k (index = degree), exact.
std::vector<BigInt> chebyshev_coefficients(int k);

}  // namespace dysonclt
