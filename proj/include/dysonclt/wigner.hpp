#pragma once

#include <cstdint>
#include <vector>

#include "entry_process.hpp"
#include "index_set.hpp"

namespace dysonclt {

// One realization of every matrix-entry process needed for a run.  Entry
// (i,j) is sampled from a sub-seed derived from (seed,i,j) alone, so any
// submatrix and any sampling order reproduce the same values, and the (j,i)
// entry is definitionally the copy (beta=1) or conjugate (beta=2) of (i,j).
class EnsembleSample {
  public:
    int beta() const { return beta_; }
    const std::vector<double>& grid() const { return grid_; }
    int ambient_dim() const { return ambient_dim_; }

    // Entry path value X(i,j|t_node) for 1 <= i <= j <= ambient_dim, i and j
    // restricted to the sampled universe.
    std::complex<double> entry(int i, int j, int node) const {
        if (node < 0 || node >= static_cast<int>(grid_.size()))
            throw std::out_of_range("time index out of range");
        const std::size_t pi = position(i);
        const std::size_t pj = position(j);
        const std::size_t lo = std::min(pi, pj);
        const std::size_t hi = std::max(pi, pj);
        const std::complex<double> v = values_[(hi * (hi + 1) / 2 + lo) * grid_.size() +
                                               static_cast<std::size_t>(node)];
        return pi <= pj ? v : std::conj(v);
    }

    friend EnsembleSample sample_ensemble_subset(std::vector<int> universe,
                                                 const EntryProcessSpec& spec,
                                                 const std::vector<double>& grid,
                                                 std::uint64_t seed, std::size_t max_values);

  private:
    std::size_t position(int index) const {
        if (prefix_universe_) {
            if (index < 1 || index > ambient_dim_) throw std::out_of_range("index outside universe");
            return static_cast<std::size_t>(index - 1);
        }
        const auto it = std::lower_bound(universe_.begin(), universe_.end(), index);
        if (it == universe_.end() || *it != index) throw std::out_of_range("index outside universe");
        return static_cast<std::size_t>(it - universe_.begin());
    }

    int beta_ = 1;
    int ambient_dim_ = 0;
    bool prefix_universe_ = true;
    std::vector<int> universe_;
    std::vector<double> grid_;
    // Flat triangular-pair-major storage: pair (lo<=hi) at offset
    // hi(hi+1)/2+lo, each pair holding one value per grid node.
    std::vector<std::complex<double>> values_;
};

// Samples entries for every pair drawn from `universe` (sorted positive
// indices).  max_values caps the path storage footprint.
EnsembleSample sample_ensemble_subset(std::vector<int> universe, const EntryProcessSpec& spec,
                                      const std::vector<double>& grid, std::uint64_t seed,
                                      std::size_t max_values = 150'000'000);

// Full-square variant: universe = {1,...,ambient_dim}.
EnsembleSample sample_ensemble(int ambient_dim, const EntryProcessSpec& spec,
                               const std::vector<double>& grid, std::uint64_t seed,
                               std::size_t max_values = 150'000'000);

// The |B|x|B| principal submatrix [X(b_r,b_s|t_node)], rows/columns ordered by
// sorted B; exactly symmetric (beta=1) / Hermitian (beta=2) by construction.
Eigen::MatrixXd submatrix_real(const EnsembleSample& sample, const IndexSet& b, int node);
Eigen::MatrixXcd submatrix_complex(const EnsembleSample& sample, const IndexSet& b, int node);

}  // namespace dysonclt
