#include "dysonclt/wigner.hpp"

#include <stdexcept>

namespace dysonclt {

EnsembleSample sample_ensemble_subset(std::vector<int> universe, const EntryProcessSpec& spec,
                                      const std::vector<double>& grid, std::uint64_t seed,
                                      std::size_t max_values) {
    spec.validate();
    if (universe.empty()) throw std::invalid_argument("universe must be nonempty");
    for (std::size_t i = 0; i < universe.size(); ++i) {
        if (universe[i] < 1) throw std::invalid_argument("universe indices must be positive");
        if (i > 0 && universe[i] <= universe[i - 1])
            throw std::invalid_argument("universe must be strictly increasing");
    }
    const std::size_t d = universe.size();
    const std::size_t n_nodes = grid.size();
    const std::size_t n_pairs = d * (d + 1) / 2;
    if (n_pairs * n_nodes > max_values)
        throw std::runtime_error("ensemble path storage exceeds the configured capacity");

    EnsembleSample s;
    s.beta_ = spec.beta;
    s.grid_ = grid;
    s.ambient_dim_ = universe.back();
    s.prefix_universe_ = universe.back() == static_cast<int>(d);
    s.universe_ = std::move(universe);
    s.values_.resize(n_pairs * n_nodes);

    const Eigen::MatrixXd chol = grid_cholesky(spec.covariance, grid);
    for (std::size_t pj = 0; pj < d; ++pj) {
        const int j = s.universe_[pj];
        for (std::size_t pi = 0; pi <= pj; ++pi) {
            const int i = s.universe_[pi];
            // Sub-seed from the matrix labels, not the universe positions, so
            // overlapping runs with different universes share entry values.
            Xoshiro256pp rng(derive_seed(seed, static_cast<std::uint64_t>(i),
                                         static_cast<std::uint64_t>(j)));
            const EntryPath path = i == j ? sample_diagonal_path(spec, chol, rng)
                                          : sample_offdiagonal_path(spec, chol, rng);
            std::copy(path.values.begin(), path.values.end(),
                      s.values_.begin() + static_cast<std::ptrdiff_t>(
                                              (pj * (pj + 1) / 2 + pi) * n_nodes));
        }
    }
    return s;
}

EnsembleSample sample_ensemble(int ambient_dim, const EntryProcessSpec& spec,
                               const std::vector<double>& grid, std::uint64_t seed,
                               std::size_t max_values) {
    if (ambient_dim < 1) throw std::invalid_argument("ambient_dim must be >= 1");
    std::vector<int> universe(static_cast<std::size_t>(ambient_dim));
    for (int i = 0; i < ambient_dim; ++i) universe[static_cast<std::size_t>(i)] = i + 1;
    return sample_ensemble_subset(std::move(universe), spec, grid, seed, max_values);
}

namespace {

void check_submatrix_args(const EnsembleSample& sample, const IndexSet& b, int node) {
    if (node < 0 || node >= static_cast<int>(sample.grid().size()))
        throw std::out_of_range("time index out of range");
    if (b.max_element() > sample.ambient_dim())
        throw std::out_of_range("index set exceeds the ambient dimension");
}

}  // namespace

Eigen::MatrixXd submatrix_real(const EnsembleSample& sample, const IndexSet& b, int node) {
    check_submatrix_args(sample, b, node);
    const auto n = static_cast<Eigen::Index>(b.elements.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = r; c < n; ++c) {
            const double v = sample
                                 .entry(b.elements[static_cast<std::size_t>(r)],
                                        b.elements[static_cast<std::size_t>(c)], node)
                                 .real();
            m(r, c) = v;
            m(c, r) = v;
        }
    return m;
}

Eigen::MatrixXcd submatrix_complex(const EnsembleSample& sample, const IndexSet& b, int node) {
    check_submatrix_args(sample, b, node);
    const auto n = static_cast<Eigen::Index>(b.elements.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = r; c < n; ++c) {
            const std::complex<double> v =
                sample.entry(b.elements[static_cast<std::size_t>(r)],
                             b.elements[static_cast<std::size_t>(c)], node);
            m(r, c) = v;
            m(c, r) = std::conj(v);
        }
    return m;
}

}  // namespace dysonclt
