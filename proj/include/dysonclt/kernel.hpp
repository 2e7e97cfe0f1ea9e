#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "dysonclt/covariance.hpp"

namespace dysonclt {

// Covariance kernel C(z,s;w,t) of the limiting three-dimensional field on
// H x R:  (1/2pi) ln |(c(s,t) min(|z|^2,|w|^2) - z w) / (same - z conj(w))|,
// evaluated through the two-branch form for |z| <= |w| and |z| > |w|.
// Returns +infinity on the singular diagonal (c(s,t) = 1, z = w); callers
// wanting finite numbers mollify (see gram_pd_check).  Exactly symmetric
// under swapping (z,s) <-> (w,t) as long as the covariance itself evaluates
// symmetrically (true for the built-in kinds).
double kernel_c(std::complex<double> z, double s, std::complex<double> w, double t,
                const CovarianceFn& covariance);

// Green function of the Laplacian on the upper half plane with Dirichlet
// boundary: -(1/2pi) ln |(z - w)/(z - conj(w))|.  +infinity at z = w.
double green_halfplane(std::complex<double> z, std::complex<double> w);

// Identification of the interior of {-2 sqrt(y) < x < 2 sqrt(y)} with H:
// omega(x, y) = x/2 + i sqrt(y - (x/2)^2), with |omega(x,y)|^2 = y.
// Boundary or exterior input throws std::domain_error.
std::complex<double> omega(double x, double y);

// omega_inv(z) = (2 Re z, |z|^2).
std::pair<double, double> omega_inv(std::complex<double> z);

// A monotone section through the (size, time) plane: matrix-size profile phi
// (continuous, nonincreasing, positive), time profile psi (continuous,
// nondecreasing), at least one strictly monotone, plus the entry-process
// covariance (strictly positive, decaying in time distance).
struct SectionSpec {
    std::function<double(double)> phi;
    std::function<double(double)> psi;
    double t0 = 0.0;
    CovarianceFn covariance = CovarianceFn::constant(1.0);
};

// The section map into H:
//   xi(x,t) = c(psi(t0), psi(t)) * (x/2 + i sqrt(phi(t) - (x/2)^2))  for t >= t0,
//   and the same with prefactor 1 / c(psi(t), psi(t0)) for t < t0.
// Requires -2 sqrt(phi(t)) < x < 2 sqrt(phi(t)).
std::complex<double> xi(double x, double t, const SectionSpec& sec);

// Inverse of xi: recovers t by bisection on the strictly decreasing radial
// profile r(t) = |xi(0,t)| (tolerance 1e-12, at most 200 iterations), then x
// from the prefactor-stripped point.  Throws std::runtime_error when the
// radial profile fails to be strictly monotone on the bracketed range, since
// that breaks bijectivity of the section map.
std::pair<double, double> xi_inv(std::complex<double> zeta, const SectionSpec& sec);

struct PullbackReport {
    // The identity requires the covariance to be multiplicative along the
    // section: c(psi(t1), psi(t2)) = F(t2)/F(t1) for t1 <= t2, where F is the
    // xi prefactor.  When the given covariance is not (e.g. a constant < 1
    // across distinct times), the check is reported as inapplicable instead
    // of failing.
    bool applicable = true;
    double max_discrepancy = 0.0;
};

// Checks, over all pairs of the given (x, t) points, the pullback identity
//   kernel_c(omega(x1, phi(t1)), psi(t1); omega(x2, phi(t2)), psi(t2))
//     = green_halfplane(xi(x1,t1), xi(x2,t2)),
// i.e. that the field restricted to a monotone section is a Gaussian Free
// Field in the xi coordinate.  Pairs where both sides are +infinity
// (coincident images) are skipped.
PullbackReport section_pullback_check(const SectionSpec& sec,
                                      const std::vector<std::pair<double, double>>& points);

// Minimum eigenvalue of the Gram matrix of kernel_c mollified against small
// square bumps of width epsilon centered at the given (z, s) points
// (midpoint rule on a 5x5 stencil per point; the second stencil is offset by
// half a cell so the singular diagonal is never sampled).  Any non-finite
// entry triggers one retry on a 7x7 stencil, then std::runtime_error.
// Positive-definiteness of the continuum kernel predicts a result that is
// nonnegative up to quadrature and eigensolver noise.
double gram_pd_check(const std::vector<std::pair<std::complex<double>, double>>& points,
                     const CovarianceFn& covariance, double epsilon);

}  // namespace dysonclt
