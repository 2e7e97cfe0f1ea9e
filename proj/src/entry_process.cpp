#include "dysonclt/entry_process.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace dysonclt {
namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;
constexpr double kSqrt3 = 1.7320508075688772935274463415059;
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

// {-sqrt(3), 0, +sqrt(3)} with probabilities {1/6, 2/3, 1/6}: mean 0,
// E Z^2 = 1, E Z^4 = 3, exactly the Gaussian-matching fourth moment.
double three_point(Xoshiro256pp& rng) {
    const double u = rng.uniform01();
    if (u < 1.0 / 6.0) return -kSqrt3;
    if (u >= 5.0 / 6.0) return kSqrt3;
    return 0.0;
}

Eigen::VectorXd correlated_normals(const Eigen::MatrixXd& chol, Xoshiro256pp& rng) {
    Eigen::VectorXd g(chol.rows());
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = rng.normal();
    return chol * g;
}

bool is_constant_one(const CovarianceFn& c) {
    return c.kind() == CovarianceKind::Constant && c.value() == 1.0;
}

}  // namespace

void EntryProcessSpec::validate() const {
    if (beta != 1 && beta != 2) throw std::invalid_argument("beta must be 1 or 2");
    if (family == EntryFamily::FrozenThreePoint && !is_constant_one(covariance))
        throw std::invalid_argument("FrozenThreePoint requires covariance Constant(1)");
    if (family == EntryFamily::StaticIID) {
        if (!is_constant_one(covariance))
            throw std::invalid_argument("StaticIID entries are constant in time and require covariance Constant(1)");
        if (static_distribution != "gaussian" && static_distribution != "three_point")
            throw std::invalid_argument("StaticIID distribution must be 'gaussian' or 'three_point'");
    }
}

Eigen::MatrixXd grid_cholesky(const CovarianceFn& c, const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("time grid must be nonempty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("time grid must be strictly increasing");
    Eigen::MatrixXd m = c.grid_matrix(grid);
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        m.diagonal().array() += 1e-12;
        llt.compute(m);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("grid covariance matrix is not positive semidefinite (inadmissible)");
    }
    return llt.matrixL();
}

EntryPath sample_offdiagonal_path(const EntryProcessSpec& spec, const Eigen::MatrixXd& chol,
                                  Xoshiro256pp& rng) {
    const auto n = static_cast<std::size_t>(chol.rows());
    EntryPath path;
    path.values.resize(n);
    const bool frozen_three_point =
        spec.family == EntryFamily::FrozenThreePoint ||
        (spec.family == EntryFamily::StaticIID && spec.static_distribution == "three_point");
    if (spec.family == EntryFamily::GaussianStationary) {
        if (spec.beta == 1) {
            const Eigen::VectorXd v = correlated_normals(chol, rng);
            for (std::size_t i = 0; i < n; ++i) path.values[i] = v(static_cast<Eigen::Index>(i));
        } else {
            const Eigen::VectorXd re = correlated_normals(chol, rng);
            const Eigen::VectorXd im = correlated_normals(chol, rng);
            for (std::size_t i = 0; i < n; ++i)
                path.values[i] = {kInvSqrt2 * re(static_cast<Eigen::Index>(i)),
                                  kInvSqrt2 * im(static_cast<Eigen::Index>(i))};
        }
    } else if (frozen_three_point) {
        std::complex<double> v;
        if (spec.beta == 1) {
            v = three_point(rng);
        } else {
            const double a = three_point(rng);
            const double b = three_point(rng);
            v = {kInvSqrt2 * a, kInvSqrt2 * b};
        }
        for (auto& x : path.values) x = v;
    } else {  // StaticIID gaussian
        std::complex<double> v;
        if (spec.beta == 1) {
            v = rng.normal();
        } else {
            const double a = rng.normal();
            const double b = rng.normal();
            v = {kInvSqrt2 * a, kInvSqrt2 * b};
        }
        for (auto& x : path.values) x = v;
    }
    return path;
}

EntryPath sample_offdiagonal_path(const EntryProcessSpec& spec, const std::vector<double>& grid,
                                  Xoshiro256pp& rng) {
    return sample_offdiagonal_path(spec, grid_cholesky(spec.covariance, grid), rng);
}

EntryPath sample_diagonal_path(const EntryProcessSpec& spec, const Eigen::MatrixXd& chol,
                               Xoshiro256pp& rng) {
    const auto n = static_cast<std::size_t>(chol.rows());
    const double scale = spec.beta == 1 ? kSqrt2 : 1.0;
    EntryPath path;
    path.values.resize(n);
    const bool frozen_three_point =
        spec.family == EntryFamily::FrozenThreePoint ||
        (spec.family == EntryFamily::StaticIID && spec.static_distribution == "three_point");
    if (spec.family == EntryFamily::GaussianStationary) {
        const Eigen::VectorXd v = correlated_normals(chol, rng);
        for (std::size_t i = 0; i < n; ++i)
            path.values[i] = scale * v(static_cast<Eigen::Index>(i));
    } else {
        const double v = scale * (frozen_three_point ? three_point(rng) : rng.normal());
        for (auto& x : path.values) x = v;
    }
    return path;
}

EntryPath sample_diagonal_path(const EntryProcessSpec& spec, const std::vector<double>& grid,
                               Xoshiro256pp& rng) {
    return sample_diagonal_path(spec, grid_cholesky(spec.covariance, grid), rng);
}

double AdmissibilityReport::max_abs_z() const {
    double m = 0.0;
    for (const auto& row : rows) m = std::max(m, std::abs(row.z));
    return m;
}

AdmissibilityReport check_admissibility(const EntryProcessSpec& spec,
                                        const std::vector<double>& grid, int n_samples,
                                        std::uint64_t seed) {
    spec.validate();
    if (n_samples < 1000) throw std::invalid_argument("check_admissibility needs n_samples >= 1000");
    const Eigen::MatrixXd chol = grid_cholesky(spec.covariance, grid);
    const std::size_t n = grid.size();
    const std::size_t n_pairs = n * (n + 1) / 2;
    // Per pair, a small set of product statistics; accumulate sum and sum of
    // squares for standard errors.
    const std::size_t n_stats = spec.beta == 1 ? 2 : 5;
    std::vector<double> sum(n_pairs * n_stats, 0.0), sumsq(n_pairs * n_stats, 0.0);

    Xoshiro256pp rng(derive_seed(seed, 0x0ffd1a6));
    for (int it = 0; it < n_samples; ++it) {
        const EntryPath path = sample_offdiagonal_path(spec, chol, rng);
        std::size_t pair = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j, ++pair) {
                const std::complex<double> zi = path.values[i];
                const std::complex<double> zj = path.values[j];
                double stats[5];
                if (spec.beta == 1) {
                    stats[0] = zi.real() * zj.real();
                    stats[1] = stats[0] * stats[0];
                } else {
                    const std::complex<double> zz = zi * zj;
                    const std::complex<double> zzbar = zi * std::conj(zj);
                    stats[0] = zz.real();
                    stats[1] = zz.imag();
                    stats[2] = zzbar.real();
                    stats[3] = zzbar.imag();
                    stats[4] = std::norm(zi) * std::norm(zj);
                }
                for (std::size_t k = 0; k < n_stats; ++k) {
                    sum[pair * n_stats + k] += stats[k];
                    sumsq[pair * n_stats + k] += stats[k] * stats[k];
                }
            }
        }
    }

    AdmissibilityReport report;
    std::size_t pair = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j, ++pair) {
            const double s = grid[i];
            const double t = grid[j];
            const double c = spec.covariance.evaluate(s, t);
            const char* names1[] = {"E[Z(s)Z(t)]", "E[Z^2(s)Z^2(t)]"};
            const char* names2[] = {"Re E[Z(s)Z(t)]", "Im E[Z(s)Z(t)]", "Re E[Z(s)conj Z(t)]",
                                    "Im E[Z(s)conj Z(t)]", "E[|Z(s)|^2 |Z(t)|^2]"};
            const double targets1[] = {c, 2.0 * c * c + 1.0};
            const double targets2[] = {0.0, 0.0, c, 0.0, c * c + 1.0};
            for (std::size_t k = 0; k < n_stats; ++k) {
                MomentRow row;
                row.s = s;
                row.t = t;
                row.name = spec.beta == 1 ? names1[k] : names2[k];
                row.target = spec.beta == 1 ? targets1[k] : targets2[k];
                const double mean = sum[pair * n_stats + k] / n_samples;
                const double var =
                    std::max(0.0, (sumsq[pair * n_stats + k] - n_samples * mean * mean) /
                                      (n_samples - 1.0));
                row.empirical = mean;
                row.std_error = std::sqrt(var / n_samples);
                const double diff = mean - row.target;
                row.z = row.std_error > 0.0 ? diff / row.std_error : (diff == 0.0 ? 0.0 : INFINITY);
                report.rows.push_back(std::move(row));
            }
        }
    }
    return report;
}

}  // namespace dysonclt
