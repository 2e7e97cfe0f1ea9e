#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "covariance.hpp"
#include "rng.hpp"

namespace dysonclt {

enum class EntryFamily { GaussianStationary, FrozenThreePoint, StaticIID };

struct EntryProcessSpec {
    int beta = 1;
    EntryFamily family = EntryFamily::GaussianStationary;
    CovarianceFn covariance = CovarianceFn::constant(1.0);
    // StaticIID only: "gaussian" or "three_point".
    std::string static_distribution = "gaussian";

    void validate() const;
    bool time_frozen() const { return family != EntryFamily::GaussianStationary; }
};

// One scalar entry process evaluated on the experiment's time grid.
// Imaginary parts are zero for every real-valued law (all of beta=1, and
// diagonal paths for beta=2).
struct EntryPath {
    std::vector<std::complex<double>> values;
};

// Lower-triangular factor of [c(t_i,t_j)]; retries once with 1e-12 diagonal
// jitter before declaring the grid covariance inadmissible.
Eigen::MatrixXd grid_cholesky(const CovarianceFn& c, const std::vector<double>& grid);

// Off-diagonal law: beta=1 mean-zero Gaussian vector with covariance
// [c(t_i,t_j)]; beta=2 real and imaginary parts independent Gaussians with
// covariance [d(t_i,t_j)]/2 each, so E Z(s) conj(Z(t)) = d(s,t) and
// E Z(s)Z(t) = 0.  Frozen families draw once and replicate across the grid.
EntryPath sample_offdiagonal_path(const EntryProcessSpec& spec, const Eigen::MatrixXd& chol,
                                  Xoshiro256pp& rng);
EntryPath sample_offdiagonal_path(const EntryProcessSpec& spec, const std::vector<double>& grid,
                                  Xoshiro256pp& rng);

// Diagonal law: beta=1 Gaussian with covariance 2[c(t_i,t_j)] (c(t,t)=1 is
// half the diagonal second moment), beta=2 Gaussian with covariance
// [d(t_i,t_j)].  The frozen three-point diagonal is scaled by sqrt(2) for
// beta=1 so its fourth moment 12 matches the Gaussian value 3*(E Y^2)^2.
EntryPath sample_diagonal_path(const EntryProcessSpec& spec, const Eigen::MatrixXd& chol,
                               Xoshiro256pp& rng);
EntryPath sample_diagonal_path(const EntryProcessSpec& spec, const std::vector<double>& grid,
                               Xoshiro256pp& rng);

struct MomentRow {
    double s = 0.0;
    double t = 0.0;
    std::string name;
    double empirical = 0.0;
    double std_error = 0.0;
    double target = 0.0;
    double z = 0.0;
};

struct AdmissibilityReport {
    std::vector<MomentRow> rows;
    double max_abs_z() const;
};

// Monte Carlo check of the admissibility moment conditions on the off-diagonal
// law: E Z(s)Z(t) = c and E Z^2(s)Z^2(t) = 2c^2+1 for beta=1, and the complex
// analogs E Z(s)Z(t) = 0, E Z(s)conj(Z(t)) = d, E |Z(s)|^2|Z(t)|^2 = d^2+1
// for beta=2.
AdmissibilityReport check_admissibility(const EntryProcessSpec& spec,
                                        const std::vector<double>& grid, int n_samples,
                                        std::uint64_t seed);

}  // namespace dysonclt
