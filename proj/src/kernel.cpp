#include "dysonclt/kernel.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace dysonclt {
namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

double xi_prefactor(double t, const SectionSpec& sec) {
    const double p0 = sec.psi(sec.t0), pt = sec.psi(t);
    return t >= sec.t0 ? sec.covariance.evaluate(p0, pt)
                       : 1.0 / sec.covariance.evaluate(pt, p0);
}

}  // namespace

double kernel_c(std::complex<double> z, double s, std::complex<double> w, double t,
                const CovarianceFn& covariance) {
    const double c = covariance.evaluate(s, t);
    // Anchor the branch at the smaller-modulus point; break ties
    // lexicographically so the swapped call evaluates the same expression
    // and the symmetry invariant holds bitwise.
    const double nz = std::norm(z), nw = std::norm(w);
    bool z_first = nz < nw;
    if (nz == nw)
        z_first = z.real() < w.real() || (z.real() == w.real() && z.imag() <= w.imag());
    const std::complex<double>& inner = z_first ? z : w;
    const std::complex<double>& outer = z_first ? w : z;
    const std::complex<double> num = c * inner - outer;
    const std::complex<double> den = c * inner - std::conj(outer);
    return -std::log(std::norm(num) / std::norm(den)) / (4.0 * kPi);
}

double green_halfplane(std::complex<double> z, std::complex<double> w) {
    return -std::log(std::norm(z - w) / std::norm(z - std::conj(w))) / (4.0 * kPi);
}

std::complex<double> omega(double x, double y) {
    if (!(y > 0.0) || !(std::abs(x) < 2.0 * std::sqrt(y)))
        throw std::domain_error("omega needs y > 0 and -2 sqrt(y) < x < 2 sqrt(y)");
    return {0.5 * x, std::sqrt(y - 0.25 * x * x)};
}

std::pair<double, double> omega_inv(std::complex<double> z) {
    return {2.0 * z.real(), std::norm(z)};
}

std::complex<double> xi(double x, double t, const SectionSpec& sec) {
    return xi_prefactor(t, sec) * omega(x, sec.phi(t));
}

std::pair<double, double> xi_inv(std::complex<double> zeta, const SectionSpec& sec) {
    const double target = std::abs(zeta);
    const auto radial = [&](double t) { return xi_prefactor(t, sec) * std::sqrt(sec.phi(t)); };

    double lo = sec.t0 - 1.0, hi = sec.t0 + 1.0;
    if (radial(lo) < radial(sec.t0) || radial(sec.t0) < radial(hi))
        throw std::runtime_error(
            "xi_inv: the radial profile |xi(0,t)| is not decreasing, so the section map "
            "is not a bijection");

    // Expand the bracket until radial(lo) >= target >= radial(hi).
    for (double step = 1.0; radial(hi) > target;) {
        if (step > 1e18)
            throw std::runtime_error("xi_inv: radial profile never decays to |zeta|");
        step *= 2.0;
        hi += step;
    }
    for (double step = 1.0; radial(lo) < target;) {
        if (step > 1e18)
            throw std::runtime_error("xi_inv: radial profile never grows to |zeta|");
        step *= 2.0;
        lo -= step;
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (radial(mid) >= target ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    return {2.0 * zeta.real() / xi_prefactor(t, sec), t};
}

PullbackReport section_pullback_check(const SectionSpec& sec,
                                      const std::vector<std::pair<double, double>>& points) {
    PullbackReport report;
    const std::size_t n = points.size();

    // The identity is only claimed for covariances that are multiplicative
    // along the section: F(t2)/F(t1) = c(psi(t1), psi(t2)) for t1 <= t2.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double ta = std::min(points[i].second, points[j].second);
            const double tb = std::max(points[i].second, points[j].second);
            const double ratio = xi_prefactor(tb, sec) / xi_prefactor(ta, sec);
            const double direct = sec.covariance.evaluate(sec.psi(ta), sec.psi(tb));
            if (std::abs(ratio - direct) > 1e-10 * (1.0 + std::abs(direct))) {
                report.applicable = false;
                return report;
            }
        }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto [x1, t1] = points[i];
            const auto [x2, t2] = points[j];
            const double lhs = kernel_c(omega(x1, sec.phi(t1)), sec.psi(t1),
                                        omega(x2, sec.phi(t2)), sec.psi(t2), sec.covariance);
            const double rhs = green_halfplane(xi(x1, t1, sec), xi(x2, t2, sec));
            if (!std::isfinite(lhs) && !std::isfinite(rhs)) continue;  // coincident images
            report.max_discrepancy = std::max(report.max_discrepancy, std::abs(lhs - rhs));
        }
    return report;
}

double gram_pd_check(const std::vector<std::pair<std::complex<double>, double>>& points,
                     const CovarianceFn& covariance, double epsilon) {
    if (points.empty()) throw std::invalid_argument("gram_pd_check needs at least one point");
    if (!(epsilon > 0.0)) throw std::invalid_argument("mollifier width must be positive");
    const int n = static_cast<int>(points.size());

    for (int stencil : {5, 7}) {
        const double cell = epsilon / stencil;
        // Midpoint nodes for the row bump; the column bump's nodes sit half a
        // cell further so the kernel is never evaluated on its singular
        // diagonal.  The resulting matrix is symmetrized before the
        // eigensolve (the offset breaks exact symmetry at quadrature order).
        Eigen::MatrixXd gram(n, n);
        bool finite = true;
        for (int k = 0; k < n && finite; ++k)
            for (int l = 0; l < n && finite; ++l) {
                double acc = 0.0;
                for (int a = 0; a < stencil; ++a)
                    for (int b = 0; b < stencil; ++b)
                        for (int a2 = 0; a2 < stencil; ++a2)
                            for (int b2 = 0; b2 < stencil; ++b2) {
                                const std::complex<double> u =
                                    points[static_cast<std::size_t>(k)].first +
                                    std::complex<double>((a + 0.5) * cell - 0.5 * epsilon,
                                                         (b + 0.5) * cell - 0.5 * epsilon);
                                const std::complex<double> v =
                                    points[static_cast<std::size_t>(l)].first +
                                    std::complex<double>((a2 + 1.0) * cell - 0.5 * epsilon,
                                                         (b2 + 1.0) * cell - 0.5 * epsilon);
                                acc += kernel_c(u, points[static_cast<std::size_t>(k)].second, v,
                                                points[static_cast<std::size_t>(l)].second,
                                                covariance);
                            }
                gram(k, l) = acc / (static_cast<double>(stencil) * stencil * stencil * stencil);
                if (!std::isfinite(gram(k, l))) finite = false;
            }
        if (!finite) continue;
        const Eigen::MatrixXd symmetric = 0.5 * (gram + gram.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric,
                                                              Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff();
    }
    throw std::runtime_error("gram_pd_check: mollified kernel not finite on the refined stencil");
}

}  // namespace dysonclt
