#include "dysonclt/theory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

namespace dysonclt {
namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

double to_double(const BigInt& v) { return v.convert_to<double>(); }

double pow_int(double x, int n) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= x;
    return p;
}

std::complex<double> cpow_int(std::complex<double> x, int n) {
    std::complex<double> p{1.0, 0.0};
    for (int i = 0; i < n; ++i) p *= x;
    return p;
}

}  // namespace

void CovarianceQuery::validate() const {
    if (k_p < 1 || k_q < 1) throw std::invalid_argument("degrees must be >= 1");
    if (!(b_p > 0.0) || !(b_q > 0.0)) throw std::invalid_argument("b_p, b_q must be positive");
    if (b_pq < 0.0 || b_pq > std::min(b_p, b_q))
        throw std::invalid_argument("b_pq must lie in [0, min(b_p, b_q)]");
    if (c < 0.0 || c > 1.0) throw std::invalid_argument("c must lie in [0,1]");
    if (beta != 1 && beta != 2) throw std::invalid_argument("beta must be 1 or 2");
}

void QuadratureParams::validate() const {
    if (n_nodes < 64) throw std::invalid_argument("need at least 64 quadrature nodes");
    if (!(radius_shrink > 0.0) || !(radius_shrink < 0.5))
        throw std::invalid_argument("radius_shrink must lie in (0, 0.5)");
}

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt result = 1;
    for (int i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;  // exact: prefix products of a binomial row divide
    }
    return result;
}

BigInt catalan(int n) {
    if (n < 0 || n > 64) throw std::out_of_range("catalan numbers supported for 0 <= n <= 64");
    const BigInt numerator = binomial(2 * n, n);
    const BigInt quotient = numerator / (n + 1);
    if (quotient * (n + 1) != numerator) throw std::logic_error("catalan division not exact");
    return quotient;
}

BigInt catalan_convolution(int r, int S) {
    if (r < 1) throw std::invalid_argument("catalan_convolution needs r >= 1");
    if (S < 0 || S > 32) throw std::out_of_range("catalan_convolution supported for 0 <= S <= 32");
    const BigInt numerator = binomial(2 * S + r, S) * r;
    const BigInt quotient = numerator / (2 * S + r);
    if (quotient * (2 * S + r) != numerator)
        throw std::logic_error("catalan convolution closed form division not exact");
    return quotient;
}

double covariance_series(const CovarianceQuery& q) {
    q.validate();
    if ((q.k_p + q.k_q) % 2 != 0) return 0.0;  // parity: no r fits both binomials
    double sum = 0.0;
    const int r0 = q.k_p % 2 == 0 ? 2 : 1;
    for (int r = r0; r <= std::min(q.k_p, q.k_q); r += 2) {
        // Exact integer prefactor first, then symmetric floating factors, so
        // the evaluator is bitwise invariant under swapping (p) <-> (q).
        const BigInt m = r * binomial(q.k_p, (q.k_p - r) / 2) * binomial(q.k_q, (q.k_q - r) / 2);
        sum += to_double(m) * pow_int(q.c * q.b_pq, r) *
               (pow_int(q.b_p, (q.k_p - r) / 2) * pow_int(q.b_q, (q.k_q - r) / 2));
    }
    return 2.0 / q.beta * sum;
}

double covariance_contour(const CovarianceQuery& q, const QuadratureParams& quad) {
    q.validate();
    quad.validate();
    const double a = q.c * q.b_pq / q.b_p;
    if (a == 0.0) return 0.0;  // the integrand carries a factor c b_pq
    const double delta = quad.radius_shrink;
    const int n = quad.n_nodes;
    const double rz = std::sqrt(q.b_p) * (1.0 - delta);
    const double rw = std::sqrt(q.b_q);
    // The double pole sits at w = a z, inside the outer contour by at least
    // sqrt(b_q) * delta for admissible queries; refuse near-touching setups.
    if (rw - a * rz < 1e-6)
        throw std::runtime_error("contour pole too close to the outer contour; increase radius_shrink");

    std::vector<std::complex<double>> p(static_cast<std::size_t>(n)),
        qs(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double angle = 2.0 * kPi * j / n;
        const std::complex<double> z = std::polar(rz, angle);
        const std::complex<double> w = std::polar(rw, angle);
        p[static_cast<std::size_t>(j)] = cpow_int(z + q.b_p / z, q.k_p) * z;
        qs[static_cast<std::size_t>(j)] = cpow_int(w + q.b_q / w, q.k_q) * w;
    }
    std::complex<double> sum{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
        const std::complex<double> az = a * std::polar(rz, 2.0 * kPi * j / n);
        std::complex<double> row{0.0, 0.0};
        for (int k = 0; k < n; ++k) {
            const std::complex<double> d = az - std::polar(rw, 2.0 * kPi * k / n);
            row += qs[static_cast<std::size_t>(k)] / (d * d);
        }
        sum += p[static_cast<std::size_t>(j)] * row;
    }
    const std::complex<double> value = 2.0 / q.beta * a * sum / (static_cast<double>(n) * n);
    if (std::abs(value.imag()) > 1e-9)
        throw std::runtime_error("contour quadrature lost conjugate symmetry");
    return value.real();
}

namespace {

// Gauss-Legendre nodes/weights on [-1,1].  Newton iteration on the Legendre
// recurrence; plenty for the fixed small orders used here.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(static_cast<std::size_t>(n));
    w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double step = p1 / dp;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (t * p1 - p0) / (t * t - 1.0);
        x[static_cast<std::size_t>(i)] = t;
        w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

struct PanelRule {
    std::vector<double> x, w;
    explicit PanelRule(int n) { gauss_legendre(n, x, w); }

    template <class F>
    double integrate(const F& f, double lo, double hi) const {
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * f(mid + half * x[i]);
        return acc * half;
    }
};

// Panels geometrically graded into an integrable log singularity at lo.
template <class F>
double integrate_into_singularity(const F& f, const PanelRule& rule, double lo, double hi) {
    const double width = hi - lo;
    double acc = 0.0, right = hi;
    for (int level = 1; level < 40; ++level) {
        const double left = lo + width * std::ldexp(1.0, -level);
        acc += rule.integrate(f, left, right);
        right = left;
    }
    return acc + rule.integrate(f, lo, right);  // singular stub, nodes interior
}

// Composite rule on [lo, hi], graded into whichever endpoints are singular
// (plain uniform panels when neither is).
template <class F>
double integrate_graded(const F& f, const PanelRule& rule, double lo, double hi, bool sing_lo,
                        bool sing_hi) {
    if (sing_lo && sing_hi) {
        const double mid = 0.5 * (lo + hi);
        return integrate_graded(f, rule, lo, mid, true, false) +
               integrate_graded(f, rule, mid, hi, false, true);
    }
    if (sing_hi)
        return integrate_into_singularity([&](double x) { return f(lo + hi - x); }, rule, lo, hi);
    if (sing_lo) return integrate_into_singularity(f, rule, lo, hi);
    double acc = 0.0;
    for (int panel = 0; panel < 8; ++panel) {
        const double left = lo + (hi - lo) * panel / 8.0;
        const double right = lo + (hi - lo) * (panel + 1) / 8.0;
        acc += rule.integrate(f, left, right);
    }
    return acc;
}

}  // namespace

double covariance_logkernel(const CovarianceQuery& q, const QuadratureParams& quad) {
    q.validate();
    quad.validate();
    if ((q.k_p + q.k_q) % 2 != 0) return 0.0;  // odd total degree integrates to zero exactly
    const double rho = q.c * q.b_pq / std::sqrt(q.b_p * q.b_q);
    if (rho == 0.0) return 0.0;

    const double sp = std::sqrt(q.b_p), sq = std::sqrt(q.b_q);
    const int kp = q.k_p, kq = q.k_q;
    const auto gp = [&](double theta) {
        return pow_int(2.0 * sp * std::cos(theta), kp - 1) * 2.0 * sp * std::sin(theta);
    };
    const auto gq = [&](double theta) {
        return pow_int(2.0 * sq * std::cos(theta), kq - 1) * 2.0 * sq * std::sin(theta);
    };
    // ln|rho - e^{i alpha}|; the kernel's only singularity (rho -> 1, alpha -> 0).
    // |rho - e^{i alpha}|^2 = (rho-1)^2 + 4 rho sin^2(alpha/2), a form that
    // stays positive for tiny alpha where 1 - cos(alpha) underflows to zero.
    const auto log_k = [&](double alpha) {
        const double s = std::sin(0.5 * alpha);
        return 0.5 * std::log((rho - 1.0) * (rho - 1.0) + 4.0 * rho * s * s);
    };

    const int inner_order = std::clamp(quad.n_nodes / 8, 32, 64);
    const PanelRule inner(inner_order);
    const PanelRule outer(16);

    // Angular correlation of the two boundary densities at signed lag u.
    const auto h_minus = [&](double u) {
        const double lo = std::max(0.0, u), hi = std::min(kPi, kPi + u);
        if (hi <= lo) return 0.0;
        return inner.integrate([&](double theta) { return gp(theta) * gq(theta - u); }, lo, hi);
    };
    const auto h_plus = [&](double s) {
        const double lo = std::max(0.0, s - kPi), hi = std::min(kPi, s);
        if (hi <= lo) return 0.0;
        return inner.integrate([&](double theta) { return gp(theta) * gq(s - theta); }, lo, hi);
    };

    const double i_minus =
        integrate_graded([&](double u) { return log_k(u) * h_minus(u); }, outer, -kPi, 0.0, false,
                         true) +
        integrate_graded([&](double u) { return log_k(u) * h_minus(u); }, outer, 0.0, kPi, true,
                         false);
    const double i_plus = integrate_graded([&](double s) { return log_k(s) * h_plus(s); }, outer,
                                           0.0, 2.0 * kPi, true, true);

    return 2.0 * kp * kq / (q.beta * kPi) / (2.0 * kPi) * (i_plus - i_minus);
}

double chebyshev_covariance_closed(int k_p, int k_q, double b_p, double b_q, double b_pq, double c,
                                   int beta) {
    CovarianceQuery{k_p, k_q, b_p, b_q, b_pq, c, beta}.validate();
    if (k_p != k_q) return 0.0;
    return k_p / (2.0 * beta) * pow_int(c * b_pq / std::sqrt(b_p * b_q), k_p);
}

std::vector<BigInt> chebyshev_coefficients(int k) {
    if (k < 0 || k > 32) throw std::out_of_range("chebyshev coefficients supported for k <= 32");
    std::vector<BigInt> prev{1}, cur{0, 1};
    if (k == 0) return prev;
    for (int n = 1; n < k; ++n) {
        std::vector<BigInt> next(static_cast<std::size_t>(n + 2), 0);
        for (std::size_t j = 0; j < cur.size(); ++j) next[j + 1] = 2 * cur[j];
        for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= prev[j];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

double chebyshev_covariance_expanded(int k_p, int k_q, double b_p, double b_q, double b_pq,
                                     double c, int beta) {
    CovarianceQuery{k_p, k_q, b_p, b_q, b_pq, c, beta}.validate();
    const auto ap = chebyshev_coefficients(k_p);
    const auto aq = chebyshev_coefficients(k_q);
    double sum = 0.0;
    for (int j = 1; j <= k_p; ++j) {
        if (ap[static_cast<std::size_t>(j)] == 0) continue;
        for (int l = 1; l <= k_q; ++l) {
            if (aq[static_cast<std::size_t>(l)] == 0) continue;
            const double coeff = to_double(ap[static_cast<std::size_t>(j)]) *
                                 to_double(aq[static_cast<std::size_t>(l)]) /
                                 (pow_int(2.0 * std::sqrt(b_p), j) * pow_int(2.0 * std::sqrt(b_q), l));
            sum += coeff * covariance_series({j, l, b_p, b_q, b_pq, c, beta});
        }
    }
    return sum;
}

}  // namespace dysonclt
