#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dysonclt/entry_process.hpp"
#include "dysonclt/index_set.hpp"
#include "dysonclt/stats.hpp"

namespace dysonclt {

enum class StatisticKind { TracePower, ChebyshevTrace };

// One coordinate of the fluctuation vector: a centered trace statistic of the
// submatrix `set_id` at a grid time.
struct ObservableSpec {
    std::string set_id;
    double time = 0.0;
    StatisticKind statistic = StatisticKind::TracePower;
    int k = 1;
};

// Compact human-readable tag, e.g. "full@t0:pow2" or "half@t0.5:cheb3".
// Contains no commas, so it embeds directly in CSV cells.
std::string observable_label(const ObservableSpec& o);

struct ExperimentConfig {
    int L = 100;
    int ambient_dim = 0;  // 0 means: largest index referenced by any set
    EntryProcessSpec entry;
    std::vector<double> times;
    std::map<std::string, IndexSet> sets;
    std::vector<ObservableSpec> observables;
    int n_samples = 1000;
    std::uint64_t seed = 1;
    double z_max = 5.0;
    int threads = 1;

    int beta() const { return entry.beta; }
    int resolved_ambient_dim() const;
    void validate() const;
};

// Raw per-sample statistics plus every derived estimate the comparison needs.
struct EstimateTable {
    std::vector<std::string> labels;
    std::vector<double> means;
    Eigen::MatrixXd covariance;         // unbiased, m x m
    Eigen::MatrixXd covariance_stderr;  // jackknife, entrywise
    std::vector<CumulantEstimate> cumulants;
    std::vector<std::vector<double>> samples;  // [observable][retained sample]
    int n_samples = 0;                          // retained (post-quarantine)
    int n_quarantined = 0;
    std::uint64_t seed = 0;
};

// Samples the ensemble n_samples times, evaluates every observable on each
// sample (one eigendecomposition per distinct (set, time) pair), quarantines
// non-finite samples, and reduces.  Deterministic for a fixed config seed,
// independent of the worker-thread count.
EstimateTable run_experiment(const ExperimentConfig& cfg);

// Limiting covariance of a pair of observables, routed to the matching
// evaluator: the Catalan/binomial series for trace pairs, the closed
// delta-form for Chebyshev pairs, and the monomial expansion of T_k combined
// with series bilinearity for the mixed case.
double theory_covariance(const ObservableSpec& p, const ObservableSpec& q,
                         const ExperimentConfig& cfg);

struct ComparisonRow {
    int p = 0;
    int q = 0;
    std::string label_p;
    std::string label_q;
    double theory = 0.0;
    double empirical = 0.0;
    double std_error = 0.0;
    double z = 0.0;
    bool pass = true;
};

struct GaussianityRow {
    int p = 0;
    std::string label;
    double kappa3 = 0.0;
    double kappa3_stderr = 0.0;
    double z3 = 0.0;
    double kappa4 = 0.0;
    double kappa4_stderr = 0.0;
    double z4 = 0.0;
    bool pass = true;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;            // all pairs p <= q
    std::vector<GaussianityRow> gaussianity;    // one per coordinate
    double z_max = 5.0;
    std::uint64_t seed = 0;
    int L = 0;
    int n_samples = 0;
    int n_quarantined = 0;
    double runtime_seconds = 0.0;

    bool all_pass() const;
};

// Theory-vs-empirical verdicts for every pair, plus Gaussianity diagnostics.
// A zero jackknife stderr combined with a nonzero discrepancy is reported as
// a degenerate estimate (error), never as a pass.
ComparisonReport compare(const EstimateTable& est, const ExperimentConfig& cfg);

}  // namespace dysonclt
