#include "dysonclt/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dysonclt {
namespace {

constexpr double kHalfPi = 1.5707963267948966192313216916398;

template <class Matrix>
Spectrum eigenvalues_impl(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigensolver failed to converge (norm " +
                                 std::to_string(m.norm()) + ")");
    Spectrum s;
    s.eigenvalues.assign(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + solver.eigenvalues().size());
    return s;
}

double height_prefactor(int beta) { return std::sqrt(beta * kHalfPi); }

}  // namespace

Spectrum eigenvalues(const Eigen::MatrixXd& m) { return eigenvalues_impl(m); }
Spectrum eigenvalues(const Eigen::MatrixXcd& m) { return eigenvalues_impl(m); }

double trace_power(const Spectrum& spec, int k) {
    if (k < 1) throw std::invalid_argument("trace power needs k >= 1");
    double sum = 0.0;
    for (const double lambda : spec.eigenvalues) {
        double p = lambda;
        for (int i = 1; i < k; ++i) p *= lambda;
        sum += p;
    }
    return sum;
}

double chebyshev_T(int k, double x) {
    if (k == 0) return 1.0;
    if (std::abs(x) <= 1.0) {
        double prev = 1.0, cur = x;
        for (int i = 1; i < k; ++i) {
            const double next = 2.0 * x * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    // |x| > 1: the recurrence amplifies rounding; use the hyperbolic form.
    const double magnitude = std::cosh(k * std::acosh(std::abs(x)));
    return x < 0.0 && k % 2 == 1 ? -magnitude : magnitude;
}

double chebyshev_trace(const Spectrum& spec, int k, double b, double L) {
    if (k < 1) throw std::invalid_argument("chebyshev trace needs k >= 1");
    if (!(b > 0.0) || !(L > 0.0)) throw std::invalid_argument("b and L must be positive");
    const double scale = 2.0 * std::sqrt(b * L);
    double sum = 0.0;
    for (const double lambda : spec.eigenvalues) sum += chebyshev_T(k, lambda / scale);
    return sum;
}

double height_function(const Spectrum& spec, double x, int beta) {
    const auto& ev = spec.eigenvalues;
    const auto first = std::lower_bound(ev.begin(), ev.end(), x);
    return height_prefactor(beta) * static_cast<double>(ev.end() - first);
}

HeightMomentResult height_moment_empirical(const std::vector<Spectrum>& spectra, int k, double y,
                                           double L, double x_max, int n_nodes, int beta) {
    if (spectra.empty()) throw std::invalid_argument("need at least one spectrum");
    if (n_nodes < 2) throw std::invalid_argument("need at least two quadrature nodes");
    if (!(x_max >= 2.0 * std::sqrt(y) + 1.0))
        throw std::invalid_argument("window must contain [-2 sqrt(y)-1, 2 sqrt(y)+1]");
    const double sqrt_l = std::sqrt(L);

    HeightMomentResult result;
    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(n_nodes) + spectra.size() * spectra[0].eigenvalues.size());
    for (int i = 0; i < n_nodes; ++i)
        nodes.push_back(-x_max + 2.0 * x_max * i / (n_nodes - 1.0));
    for (const auto& spec : spectra)
        for (const double lambda : spec.eigenvalues) {
            const double x = lambda / sqrt_l;
            if (x < -x_max || x > x_max)
                result.truncated = true;
            else
                nodes.push_back(x);
        }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    // Heights at interval midpoints; between consecutive refined nodes every
    // H is constant, so the midpoint value is the interior value.
    const std::size_t n_cells = nodes.size() - 1;
    const std::size_t n_samples = spectra.size();
    std::vector<double> h(n_samples * n_cells);
    std::vector<double> h_mean(n_cells, 0.0);
    for (std::size_t i = 0; i < n_samples; ++i)
        for (std::size_t c = 0; c < n_cells; ++c) {
            const double mid = 0.5 * (nodes[c] + nodes[c + 1]);
            const double v = height_function(spectra[i], sqrt_l * mid, beta);
            h[i * n_cells + c] = v;
            h_mean[c] += v / static_cast<double>(n_samples);
        }

    result.per_sample.resize(n_samples, 0.0);
    for (std::size_t i = 0; i < n_samples; ++i) {
        double acc = 0.0;
        for (std::size_t c = 0; c < n_cells; ++c) {
            const double mid = 0.5 * (nodes[c] + nodes[c + 1]);
            const double width = nodes[c + 1] - nodes[c];
            acc += std::pow(mid, k) * (h[i * n_cells + c] - h_mean[c]) * width;
        }
        result.per_sample[i] = acc;
    }
    return result;
}

double height_moment_via_traces(const Spectrum& spec, double mean_trace, int k, double L,
                                int beta) {
    return std::pow(L, -(k + 1) / 2.0) * height_prefactor(beta) / (k + 1.0) *
           (trace_power(spec, k + 1) - mean_trace);
}

}  // namespace dysonclt
