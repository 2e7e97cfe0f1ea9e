#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace dysonclt {

enum class CovarianceKind { OrnsteinUhlenbeck, Constant, TableInterpolated };

// Entry-process correlation function c(s,t) (called d(s,t) in the Hermitian
// case).  Admissibility pins the diagonal: c(t,t) = 1 for every kind, and
// values stay within [0,1].
class CovarianceFn {
  public:
    static CovarianceFn ornstein_uhlenbeck(double rate) {
        if (!(rate > 0.0)) throw std::invalid_argument("OU rate must be positive");
        CovarianceFn c;
        c.kind_ = CovarianceKind::OrnsteinUhlenbeck;
        c.param_ = rate;
        return c;
    }

    static CovarianceFn constant(double value) {
        if (!(value > 0.0) || value > 1.0)
            throw std::invalid_argument("constant covariance value must lie in (0,1]");
        CovarianceFn c;
        c.kind_ = CovarianceKind::Constant;
        c.param_ = value;
        return c;
    }

    // Rectangular table over (s,t); queries use bilinear interpolation clamped
    // to [0,1].  The diagonal is not read from the table: c(t,t) = 1 always.
    static CovarianceFn table(std::vector<double> s_grid, std::vector<double> t_grid,
                              std::vector<std::vector<double>> values) {
        if (s_grid.size() < 2 || t_grid.size() < 2)
            throw std::invalid_argument("table covariance needs at least a 2x2 grid");
        if (values.size() != s_grid.size())
            throw std::invalid_argument("table covariance row count mismatch");
        for (const auto& row : values)
            if (row.size() != t_grid.size())
                throw std::invalid_argument("table covariance column count mismatch");
        for (std::size_t i = 1; i < s_grid.size(); ++i)
            if (!(s_grid[i] > s_grid[i - 1]))
                throw std::invalid_argument("table covariance s-grid must increase");
        for (std::size_t i = 1; i < t_grid.size(); ++i)
            if (!(t_grid[i] > t_grid[i - 1]))
                throw std::invalid_argument("table covariance t-grid must increase");
        CovarianceFn c;
        c.kind_ = CovarianceKind::TableInterpolated;
        c.s_grid_ = std::move(s_grid);
        c.t_grid_ = std::move(t_grid);
        c.values_ = std::move(values);
        return c;
    }

    CovarianceKind kind() const { return kind_; }
    double rate() const { return param_; }
    double value() const { return param_; }

    double evaluate(double s, double t) const {
        switch (kind_) {
            case CovarianceKind::OrnsteinUhlenbeck:
                return std::exp(-param_ * std::abs(s - t));
            case CovarianceKind::Constant:
                return s == t ? 1.0 : param_;
            case CovarianceKind::TableInterpolated:
                if (s == t) return 1.0;
                return bilinear(s, t);
        }
        throw std::logic_error("unreachable covariance kind");
    }

    // Grid Gram matrix [c(t_i, t_j)], the object every path sampler factors.
    Eigen::MatrixXd grid_matrix(const std::vector<double>& grid) const {
        const auto n = static_cast<Eigen::Index>(grid.size());
        Eigen::MatrixXd m(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j <= i; ++j) {
                m(i, j) = evaluate(grid[static_cast<std::size_t>(i)], grid[static_cast<std::size_t>(j)]);
                m(j, i) = m(i, j);
            }
        return m;
    }

  private:
    double bilinear(double s, double t) const {
        const auto cell = [](const std::vector<double>& g, double x) {
            if (x < g.front() || x > g.back())
                throw std::out_of_range("table covariance queried outside its grid");
            std::size_t i = 0;
            while (i + 2 < g.size() && x >= g[i + 1]) ++i;
            return i;
        };
        const std::size_t i = cell(s_grid_, s);
        const std::size_t j = cell(t_grid_, t);
        const double fs = (s - s_grid_[i]) / (s_grid_[i + 1] - s_grid_[i]);
        const double ft = (t - t_grid_[j]) / (t_grid_[j + 1] - t_grid_[j]);
        const double v = (1 - fs) * ((1 - ft) * values_[i][j] + ft * values_[i][j + 1]) +
                         fs * ((1 - ft) * values_[i + 1][j] + ft * values_[i + 1][j + 1]);
        return std::min(1.0, std::max(0.0, v));
    }

    CovarianceKind kind_ = CovarianceKind::Constant;
    double param_ = 1.0;
    std::vector<double> s_grid_, t_grid_;
    std::vector<std::vector<double>> values_;
};

}  // namespace dysonclt
