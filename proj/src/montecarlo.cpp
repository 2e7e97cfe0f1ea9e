#include "dysonclt/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "dysonclt/observables.hpp"
#include "dysonclt/rng.hpp"
#include "dysonclt/theory.hpp"
#include "dysonclt/wigner.hpp"

namespace dysonclt {

namespace {

std::string format_time(double t) {
    std::ostringstream os;
    os << t;
    return os.str();
}

double to_double(const BigInt& v) { return v.convert_to<double>(); }

}  // namespace

std::string observable_label(const ObservableSpec& o) {
    std::ostringstream os;
    os << o.set_id << "@t" << format_time(o.time) << ':'
       << (o.statistic == StatisticKind::TracePower ? "pow" : "cheb") << o.k;
    return os.str();
}

int ExperimentConfig::resolved_ambient_dim() const {
    if (ambient_dim > 0) return ambient_dim;
    int dim = 0;
    for (const auto& [id, set] : sets) dim = std::max(dim, set.max_element());
    return dim;
}

void ExperimentConfig::validate() const {
    if (L < 1) throw std::invalid_argument("config: L must be positive");
    entry.validate();
    if (times.empty()) throw std::invalid_argument("config: empty time grid");
    for (double t : times)
        if (!std::isfinite(t)) throw std::invalid_argument("config: non-finite grid time");
    if (sets.empty()) throw std::invalid_argument("config: no index sets");
    if (observables.empty()) throw std::invalid_argument("config: no observables");
    if (n_samples < 100) throw std::invalid_argument("config: n_samples must be at least 100");
    if (!(z_max > 0.0)) throw std::invalid_argument("config: z_max must be positive");
    if (threads < 1) throw std::invalid_argument("config: threads must be positive");

    int max_index = 0;
    for (const auto& [id, set] : sets) max_index = std::max(max_index, set.max_element());
    if (ambient_dim > 0 && ambient_dim < max_index)
        throw std::invalid_argument("config: ambient_dim smaller than an index-set element");

    for (const ObservableSpec& o : observables) {
        if (sets.find(o.set_id) == sets.end())
            throw std::invalid_argument("config: observable references undefined set '" + o.set_id +
                                        "'");
        if (std::find(times.begin(), times.end(), o.time) == times.end())
            throw std::invalid_argument("config: observable time " + format_time(o.time) +
                                        " is not on the grid");
        if (o.k < 1) throw std::invalid_argument("config: observable degree must be positive");
    }
}

EstimateTable run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const int m = static_cast<int>(cfg.observables.size());
    const int n = cfg.n_samples;

    // One eigendecomposition per distinct (set, grid node) pair serves every
    // observable that reads it.
    std::vector<std::pair<const IndexSet*, int>> jobs;
    std::map<std::pair<std::string, int>, int> slot_of;
    std::vector<int> obs_slot(static_cast<std::size_t>(m));
    for (int p = 0; p < m; ++p) {
        const ObservableSpec& o = cfg.observables[static_cast<std::size_t>(p)];
        const auto it = std::find(cfg.times.begin(), cfg.times.end(), o.time);
        const int node = static_cast<int>(it - cfg.times.begin());
        const std::pair<std::string, int> key{o.set_id, node};
        auto slot = slot_of.find(key);
        if (slot == slot_of.end()) {
            slot = slot_of.emplace(key, static_cast<int>(jobs.size())).first;
            jobs.emplace_back(&cfg.sets.at(o.set_id), node);
        }
        obs_slot[static_cast<std::size_t>(p)] = slot->second;
    }

    // Entries are only sampled for indices some observable actually reads.
    std::set<int> universe_set;
    for (const auto& [set_ptr, node] : jobs)
        universe_set.insert(set_ptr->elements.begin(), set_ptr->elements.end());
    const std::vector<int> universe(universe_set.begin(), universe_set.end());

    std::vector<double> cheb_fraction(static_cast<std::size_t>(m), 0.0);
    for (int p = 0; p < m; ++p) {
        const ObservableSpec& o = cfg.observables[static_cast<std::size_t>(p)];
        cheb_fraction[static_cast<std::size_t>(p)] =
            static_cast<double>(cfg.sets.at(o.set_id).size()) / static_cast<double>(cfg.L);
    }

    Eigen::MatrixXd raw(m, n);
    std::vector<char> bad(static_cast<std::size_t>(n), 0);

    // Each worker owns a disjoint stride of sample indices; raw is
    // column-major, so workers write disjoint columns.  Sample i is fully
    // determined by derive_seed(cfg.seed, i+1), making the table identical
    // for every worker count.
    const auto worker = [&](int first, int stride) {
        std::vector<Spectrum> spectra(jobs.size());
        for (int i = first; i < n; i += stride) {
            try {
                const std::uint64_t sample_seed =
                    derive_seed(cfg.seed, static_cast<std::uint64_t>(i) + 1);
                const EnsembleSample sample =
                    sample_ensemble_subset(universe, cfg.entry, cfg.times, sample_seed);
                for (std::size_t j = 0; j < jobs.size(); ++j) {
                    spectra[j] = cfg.beta() == 2
                                     ? eigenvalues(submatrix_complex(sample, *jobs[j].first,
                                                                     jobs[j].second))
                                     : eigenvalues(submatrix_real(sample, *jobs[j].first,
                                                                  jobs[j].second));
                }
                bool finite = true;
                for (int p = 0; p < m; ++p) {
                    const ObservableSpec& o = cfg.observables[static_cast<std::size_t>(p)];
                    const Spectrum& spec = spectra[static_cast<std::size_t>(obs_slot[static_cast<std::size_t>(p)])];
                    double value;
                    if (o.statistic == StatisticKind::TracePower) {
                        value = std::pow(static_cast<double>(cfg.L), -0.5 * o.k) *
                                trace_power(spec, o.k);
                    } else {
                        value = chebyshev_trace(spec, o.k, cheb_fraction[static_cast<std::size_t>(p)],
                                                static_cast<double>(cfg.L));
                    }
                    if (!std::isfinite(value)) finite = false;
                    raw(p, i) = value;
                }
                if (!finite) bad[static_cast<std::size_t>(i)] = 1;
            } catch (const std::exception&) {
                bad[static_cast<std::size_t>(i)] = 1;
            }
        }
    };

    const int workers = std::max(1, std::min(cfg.threads, n));
    if (workers == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker, w, workers);
        for (std::thread& t : pool) t.join();
    }

    EstimateTable table;
    table.seed = cfg.seed;
    table.n_quarantined = static_cast<int>(std::count(bad.begin(), bad.end(), char(1)));
    if (table.n_quarantined > 0.001 * n)
        throw std::runtime_error("run_experiment: more than 0.1% of samples were non-finite (" +
                                 std::to_string(table.n_quarantined) + " of " + std::to_string(n) +
                                 ")");
    table.n_samples = n - table.n_quarantined;

    table.samples.assign(static_cast<std::size_t>(m),
                         std::vector<double>(static_cast<std::size_t>(table.n_samples)));
    for (int p = 0; p < m; ++p) {
        std::size_t out = 0;
        for (int i = 0; i < n; ++i)
            if (!bad[static_cast<std::size_t>(i)])
                table.samples[static_cast<std::size_t>(p)][out++] = raw(p, i);
    }

    table.labels.resize(static_cast<std::size_t>(m));
    table.means.resize(static_cast<std::size_t>(m));
    table.cumulants.resize(static_cast<std::size_t>(m));
    table.covariance.resize(m, m);
    table.covariance_stderr.resize(m, m);
    for (int p = 0; p < m; ++p) {
        table.labels[static_cast<std::size_t>(p)] =
            observable_label(cfg.observables[static_cast<std::size_t>(p)]);
        table.means[static_cast<std::size_t>(p)] =
            sample_mean(table.samples[static_cast<std::size_t>(p)]);
        table.cumulants[static_cast<std::size_t>(p)] =
            estimate_cumulants(table.samples[static_cast<std::size_t>(p)]);
        for (int q = p; q < m; ++q) {
            const CovarianceEstimate est = covariance_with_jackknife(
                table.samples[static_cast<std::size_t>(p)], table.samples[static_cast<std::size_t>(q)]);
            table.covariance(p, q) = est.value;
            table.covariance(q, p) = est.value;
            table.covariance_stderr(p, q) = est.std_error;
            table.covariance_stderr(q, p) = est.std_error;
        }
    }
    return table;
}

double theory_covariance(const ObservableSpec& p, const ObservableSpec& q,
                         const ExperimentConfig& cfg) {
    const IndexSet& set_p = cfg.sets.at(p.set_id);
    const IndexSet& set_q = cfg.sets.at(q.set_id);
    const OverlapFractions f = overlap_fraction(set_p, set_q, static_cast<double>(cfg.L));
    const double c = cfg.entry.covariance.evaluate(p.time, q.time);
    const int beta = cfg.beta();

    const bool p_trace = p.statistic == StatisticKind::TracePower;
    const bool q_trace = q.statistic == StatisticKind::TracePower;
    if (p_trace && q_trace)
        return covariance_series({p.k, q.k, f.b_p, f.b_q, f.b_pq, c, beta});
    if (!p_trace && !q_trace)
        return chebyshev_covariance_closed(p.k, q.k, f.b_p, f.b_q, f.b_pq, c, beta);

    // Mixed pair: expand the Chebyshev side in monomials and use bilinearity
    // of the limiting covariance; the constant term drops under centering.
    const ObservableSpec& trace_obs = p_trace ? p : q;
    const ObservableSpec& cheb_obs = p_trace ? q : p;
    const double b_trace = p_trace ? f.b_p : f.b_q;
    const double b_cheb = p_trace ? f.b_q : f.b_p;
    const std::vector<BigInt> coeffs = chebyshev_coefficients(cheb_obs.k);
    double sum = 0.0;
    for (int l = 1; l <= cheb_obs.k; ++l) {
        const BigInt& a_l = coeffs[static_cast<std::size_t>(l)];
        if (a_l == 0) continue;
        const double scale = to_double(a_l) / std::pow(2.0 * std::sqrt(b_cheb), l);
        sum += scale * covariance_series({trace_obs.k, l, b_trace, b_cheb, f.b_pq, c, beta});
    }
    return sum;
}

bool ComparisonReport::all_pass() const {
    for (const ComparisonRow& r : rows)
        if (!r.pass) return false;
    for (const GaussianityRow& g : gaussianity)
        if (!g.pass) return false;
    return true;
}

ComparisonReport compare(const EstimateTable& est, const ExperimentConfig& cfg) {
    cfg.validate();
    const int m = static_cast<int>(cfg.observables.size());
    if (static_cast<int>(est.labels.size()) != m || est.covariance.rows() != m)
        throw std::invalid_argument("compare: estimate table does not match the config");

    // z = (empirical - theory) / stderr, except that an exact match with a
    // collapsed error bar is a legitimate z = 0 (e.g. both sides exactly 0).
    const auto z_score = [](double empirical, double theory, double se,
                            const std::string& what) {
        if (se == 0.0) {
            if (empirical == theory) return 0.0;
            throw std::runtime_error("compare: degenerate estimate for " + what +
                                     " (zero standard error, nonzero discrepancy)");
        }
        return (empirical - theory) / se;
    };

    ComparisonReport report;
    report.z_max = cfg.z_max;
    report.seed = est.seed;
    report.L = cfg.L;
    report.n_samples = est.n_samples;
    report.n_quarantined = est.n_quarantined;

    for (int p = 0; p < m; ++p) {
        for (int q = p; q < m; ++q) {
            ComparisonRow row;
            row.p = p;
            row.q = q;
            row.label_p = est.labels[static_cast<std::size_t>(p)];
            row.label_q = est.labels[static_cast<std::size_t>(q)];
            row.theory = theory_covariance(cfg.observables[static_cast<std::size_t>(p)],
                                           cfg.observables[static_cast<std::size_t>(q)], cfg);
            row.empirical = est.covariance(p, q);
            row.std_error = est.covariance_stderr(p, q);
            row.z = z_score(row.empirical, row.theory, row.std_error,
                            "pair " + row.label_p + " x " + row.label_q);
            row.pass = std::abs(row.z) <= cfg.z_max;
            report.rows.push_back(std::move(row));
        }
    }

    for (int p = 0; p < m; ++p) {
        const CumulantEstimate& cum = est.cumulants[static_cast<std::size_t>(p)];
        GaussianityRow g;
        g.p = p;
        g.label = est.labels[static_cast<std::size_t>(p)];
        g.kappa3 = cum.kappa3;
        g.kappa3_stderr = cum.kappa3_stderr;
        g.kappa4 = cum.kappa4;
        g.kappa4_stderr = cum.kappa4_stderr;
        g.z3 = z_score(cum.kappa3, 0.0, cum.kappa3_stderr, "kappa3 of " + g.label);
        g.z4 = z_score(cum.kappa4, 0.0, cum.kappa4_stderr, "kappa4 of " + g.label);
        g.pass = std::abs(g.z3) <= cfg.z_max && std::abs(g.z4) <= cfg.z_max;
        report.gaussianity.push_back(std::move(g));
    }
    return report;
}

}  // namespace dysonclt
