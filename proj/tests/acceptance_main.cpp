// Acceptance gate: every primary criterion as one pass/fail line, with the
// tolerances pinned in code.  Run bare for the full suite or pass criterion
// numbers (e.g. `dysonclt_acceptance 4 5 6`) for a subset; exits 0 iff every
// selected criterion passes.  Monte Carlo runs shared by several criteria
// (the static GOE run, the two dynamic nested runs) are computed once per
// process and cached.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dysonclt/entry_process.hpp"
#include "dysonclt/index_set.hpp"
#include "dysonclt/kernel.hpp"
#include "dysonclt/montecarlo.hpp"
#include "dysonclt/observables.hpp"
#include "dysonclt/rng.hpp"
#include "dysonclt/theory.hpp"
#include "dysonclt/wigner.hpp"

namespace {

using namespace dysonclt;
using Rational = boost::multiprecision::cpp_rational;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
    bool pass = false;
    std::string details;
};

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(3);
    out << v;
    return out.str();
}

// ---- criterion 1: the three evaluators agree on the full invariant grid ----

Verdict evaluator_agreement() {
    const auto start = Clock::now();
    const double kCs[] = {0.0, 0.3, std::exp(-0.5), 1.0};
    const double kBs[] = {0.5, 1.0, 2.0};
    int n_queries = 0;
    double worst_contour = 0.0, worst_logkernel = 0.0;
    for (int beta : {1, 2})
        for (int k_p = 1; k_p <= 8; ++k_p)
            for (int k_q = 1; k_q <= 8; ++k_q)
                for (double b_p : kBs)
                    for (double b_q : kBs)
                        for (double b_pq : {0.0, 0.25, std::min(b_p, b_q)})
                            for (double c : kCs) {
                                const CovarianceQuery q{k_p, k_q, b_p, b_q, b_pq, c, beta};
                                const double series = covariance_series(q);
                                const double scale = 1.0 + std::abs(series);
                                worst_contour = std::max(
                                    worst_contour, std::abs(covariance_contour(q) - series) / scale);
                                worst_logkernel = std::max(
                                    worst_logkernel,
                                    std::abs(covariance_logkernel(q) - series) / scale);
                                ++n_queries;
                            }
    const double elapsed = seconds_since(start);
    Verdict v;
    v.pass = n_queries >= 1500 && worst_contour <= 1e-8 && worst_logkernel <= 1e-5 &&
             elapsed <= 120.0;
    v.details = std::to_string(n_queries) + " queries, max rel contour " + fmt(worst_contour) +
                " (<=1e-8), max rel logkernel " + fmt(worst_logkernel) + " (<=1e-5), " +
                fmt(elapsed) + " s (<=120)";
    return v;
}

// ---- criterion 2: exact combinatorics ----

// Brute-force composition enumeration, the independent oracle for the closed
// form binom(2S+r,S) r/(2S+r).
BigInt convolution_brute(int r, int S) {
    if (r == 1) return catalan(S);
    BigInt total = 0;
    for (int first = 0; first <= S; ++first)
        total += catalan(first) * convolution_brute(r - 1, S - first);
    return total;
}

Verdict exact_combinatorics() {
    int checked = 0, failed = 0;
    for (int r = 1; r <= 8; ++r)
        for (int S = 0; S <= 10; ++S) {
            ++checked;
            if (catalan_convolution(r, S) != convolution_brute(r, S)) ++failed;
        }
    // Variance reconstruction: the Catalan form 2k^2 C^2_{(k-1)/2} +
    // k^2 C^2_{k/2} + sum_{r>=3} (2k^2/r) conv(r,(k-r)/2)^2 must equal the
    // binomial series sum_r 2r binom(k,(k-r)/2)^2 exactly as rationals.
    for (int k = 1; k <= 12; ++k) {
        ++checked;
        Rational form = 0;
        if (k % 2 == 1) form += Rational(2 * k * k) * catalan((k - 1) / 2) * catalan((k - 1) / 2);
        if (k % 2 == 0) form += Rational(k * k) * catalan(k / 2) * catalan(k / 2);
        for (int r = 3; r <= k; ++r) {
            if ((k - r) % 2 != 0) continue;
            const BigInt conv = catalan_convolution(r, (k - r) / 2);
            form += Rational(BigInt(2 * k * k) * conv * conv, BigInt(r));
        }
        BigInt series = 0;
        for (int r = 1; r <= k; ++r) {
            if ((k - r) % 2 != 0) continue;
            const BigInt b = binomial(k, (k - r) / 2);
            series += BigInt(2 * r) * b * b;
        }
        if (form != Rational(series)) ++failed;
    }
    Verdict v;
    v.pass = failed == 0;
    v.details = std::to_string(checked) + " exact identities, " + std::to_string(failed) +
                " failed";
    return v;
}

// ---- shared Monte Carlo runs ----

struct RunOutput {
    ExperimentConfig cfg;
    ComparisonReport report;
    double elapsed = 0.0;
};

RunOutput run_and_compare(const ExperimentConfig& cfg) {
    const auto start = Clock::now();
    RunOutput out;
    out.cfg = cfg;
    out.report = compare(run_experiment(cfg), cfg);
    out.elapsed = seconds_since(start);
    return out;
}

ExperimentConfig static_config(EntryFamily family, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.L = 200;
    cfg.entry.beta = 1;
    cfg.entry.family = family;
    cfg.entry.covariance = CovarianceFn::constant(1.0);
    cfg.times = {0.0};
    cfg.sets.emplace("full", IndexSet::prefix(200));
    for (int k = 1; k <= 3; ++k)
        cfg.observables.push_back({"full", 0.0, StatisticKind::TracePower, k});
    cfg.n_samples = 20000;
    cfg.seed = seed;
    return cfg;
}

const RunOutput& goe_static_run() {
    static const RunOutput out = run_and_compare(static_config(EntryFamily::GaussianStationary, 101));
    return out;
}

// One run per beta covers criteria 4-6: trace powers at the nested pair
// (full at t=0, half at t=0.5), plus Chebyshev degrees 1-4 on the full
// matrix at four times (decorrelation across degrees, OU autocorrelation
// across times) and on the nested half.
ExperimentConfig nested_config(int beta, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.L = 200;
    cfg.entry.beta = beta;
    cfg.entry.covariance = CovarianceFn::ornstein_uhlenbeck(1.0);
    cfg.times = {0.0, 0.25, 0.5, 1.0};
    cfg.sets.emplace("full", IndexSet::prefix(200));
    cfg.sets.emplace("half", IndexSet::prefix(100));
    for (int k = 1; k <= 3; ++k) cfg.observables.push_back({"full", 0.0, StatisticKind::TracePower, k});
    for (int k = 1; k <= 3; ++k) cfg.observables.push_back({"half", 0.5, StatisticKind::TracePower, k});
    for (double t : cfg.times)
        for (int k = 1; k <= 4; ++k)
            cfg.observables.push_back({"full", t, StatisticKind::ChebyshevTrace, k});
    for (int k = 1; k <= 4; ++k) cfg.observables.push_back({"half", 0.5, StatisticKind::ChebyshevTrace, k});
    cfg.n_samples = 20000;
    cfg.seed = seed;
    return cfg;
}

const RunOutput& nested_run(int beta) {
    static const RunOutput b1 = run_and_compare(nested_config(1, 103));
    static const RunOutput b2 = run_and_compare(nested_config(2, 106));
    return beta == 1 ? b1 : b2;
}

// Verdict over the comparison rows whose two endpoints both satisfy `keep`.
// Failing rows are named in `failures` so a FAIL line identifies the exact
// pairs without rerunning the experiment.
struct RowSummary {
    int n_rows = 0, n_failed = 0;
    double max_abs_z = 0.0;
    std::string failures;
};

template <typename Pred>
RowSummary summarize_rows(const RunOutput& run, Pred keep) {
    RowSummary s;
    for (const auto& row : run.report.rows) {
        if (!keep(run.cfg.observables[static_cast<std::size_t>(row.p)]) ||
            !keep(run.cfg.observables[static_cast<std::size_t>(row.q)]))
            continue;
        ++s.n_rows;
        if (!row.pass) {
            ++s.n_failed;
            if (s.n_failed <= 4)
                s.failures += " [" + row.label_p + " x " + row.label_q + " z=" + fmt(row.z) + "]";
            else if (s.n_failed == 5)
                s.failures += " [...]";
        }
        s.max_abs_z = std::max(s.max_abs_z, std::abs(row.z));
    }
    return s;
}

// ---- criterion 3: static GOE variances ----

Verdict goe_static() {
    // The diagonal targets are the series values 2, 4, 24; assert the routing
    // actually produces them before trusting the z-scores.
    const auto& run = goe_static_run();
    const double targets[] = {2.0, 4.0, 24.0};
    bool targets_ok = true;
    for (const auto& row : run.report.rows)
        if (row.p == row.q && row.theory != targets[row.p]) targets_ok = false;
    const auto all = summarize_rows(run, [](const ObservableSpec&) { return true; });
    Verdict v;
    v.pass = targets_ok && all.n_failed == 0 && all.n_rows == 6 && run.elapsed <= 600.0;
    v.details = std::to_string(all.n_rows) + " pairs at L=200 n=20000, max|z| " +
                fmt(all.max_abs_z) + " (<=5), " + fmt(run.elapsed) + " s (<=600)";
    return v;
}

// ---- criteria 4/5: dynamic nested traces, Chebyshev structure ----

Verdict dynamic_nested() {
    Verdict v;
    v.pass = true;
    for (int beta : {1, 2}) {
        const auto& run = nested_run(beta);
        const auto pow_rows = summarize_rows(run, [](const ObservableSpec& o) {
            return o.statistic == StatisticKind::TracePower;
        });
        v.pass = v.pass && pow_rows.n_rows == 21 && pow_rows.n_failed == 0;
        if (!v.details.empty()) v.details += "; ";
        v.details += "beta " + std::to_string(beta) + ": " + std::to_string(pow_rows.n_rows) +
                     " trace pairs, max|z| " + fmt(pow_rows.max_abs_z) + ", " +
                     fmt(run.elapsed) + " s" + pow_rows.failures;
    }
    return v;
}

Verdict chebyshev_structure() {
    Verdict v;
    v.pass = true;
    for (int beta : {1, 2}) {
        const auto& run = nested_run(beta);
        const auto cheb = [](const ObservableSpec& o) {
            return o.statistic == StatisticKind::ChebyshevTrace;
        };
        const auto rows = summarize_rows(run, cheb);
        // Count the two structural families the criterion names: zero targets
        // for distinct degrees, OU autocorrelation for equal degrees across
        // distinct times.
        int zero_rows = 0, autocorr_rows = 0;
        for (const auto& row : run.report.rows) {
            const auto& p = run.cfg.observables[static_cast<std::size_t>(row.p)];
            const auto& q = run.cfg.observables[static_cast<std::size_t>(row.q)];
            if (!cheb(p) || !cheb(q)) continue;
            if (p.k != q.k && row.theory == 0.0) ++zero_rows;
            if (p.k == q.k && p.time != q.time) ++autocorr_rows;
        }
        v.pass = v.pass && rows.n_rows == 210 && rows.n_failed == 0 && zero_rows == 150 &&
                 autocorr_rows == 36;
        if (!v.details.empty()) v.details += "; ";
        v.details += "beta " + std::to_string(beta) + ": " + std::to_string(rows.n_rows) +
                     " chebyshev pairs (" + std::to_string(zero_rows) + " zero-target, " +
                     std::to_string(autocorr_rows) + " cross-time), max|z| " +
                     fmt(rows.max_abs_z) + rows.failures;
    }
    return v;
}

// ---- criterion 6: gaussianity of every coordinate in criteria 3-5 ----

Verdict gaussianity() {
    int n_rows = 0, n_failed = 0;
    double max_abs_z = 0.0;
    std::string failures;
    const auto absorb = [&](const RunOutput& run, const char* tag) {
        for (const auto& g : run.report.gaussianity) {
            ++n_rows;
            if (!g.pass) {
                ++n_failed;
                if (n_failed <= 4)
                    failures += std::string(" [") + tag + " " + g.label + " z3=" + fmt(g.z3) +
                                " z4=" + fmt(g.z4) + "]";
                else if (n_failed == 5)
                    failures += " [...]";
            }
            max_abs_z = std::max({max_abs_z, std::abs(g.z3), std::abs(g.z4)});
        }
    };
    absorb(goe_static_run(), "static");
    absorb(nested_run(1), "beta1");
    absorb(nested_run(2), "beta2");
    Verdict v;
    v.pass = n_rows == 55 && n_failed == 0;
    v.details = std::to_string(n_rows) + " coordinates (kappa3 and excess kappa4), max|z| " +
                fmt(max_abs_z) + " (<=5)" + failures;
    return v;
}

// ---- criterion 7: the per-sample height/trace identity ----

Verdict height_trace_identity() {
    const auto start = Clock::now();
    const int L = 100, n_samples = 100;
    int checked = 0, failed = 0;
    double worst = 0.0;
    for (int beta : {1, 2}) {
        EntryProcessSpec spec;
        spec.beta = beta;
        spec.covariance = CovarianceFn::constant(1.0);
        const auto b = IndexSet::prefix(L);
        std::vector<Spectrum> spectra;
        spectra.reserve(n_samples);
        for (int i = 0; i < n_samples; ++i) {
            const auto sample =
                sample_ensemble(L, spec, {0.0}, derive_seed(107, static_cast<std::uint64_t>(beta),
                                                            static_cast<std::uint64_t>(i + 1)));
            spectra.push_back(beta == 1 ? eigenvalues(submatrix_real(sample, b, 0))
                                        : eigenvalues(submatrix_complex(sample, b, 0)));
        }
        for (int k = 0; k <= 3; ++k) {
            const auto emp = height_moment_empirical(spectra, k, 1.0, L, 3.0, 4096, beta);
            if (emp.truncated) ++failed;
            std::vector<double> traces(spectra.size());
            for (std::size_t i = 0; i < spectra.size(); ++i)
                traces[i] = trace_power(spectra[i], k + 1);
            const double mean_trace = sample_mean(traces);
            for (std::size_t i = 0; i < spectra.size(); ++i) {
                const double via = height_moment_via_traces(spectra[i], mean_trace, k, L, beta);
                const double rel = std::abs(emp.per_sample[i] - via) / (1.0 + std::abs(via));
                worst = std::max(worst, rel);
                ++checked;
                if (rel > 1e-3) ++failed;
            }
        }
    }
    Verdict v;
    v.pass = failed == 0;
    v.details = std::to_string(checked) +
                " per-sample identities (k<=3, both betas, 4096 nodes), max rel " + fmt(worst) +
                " (<=1e-3), " + fmt(seconds_since(start)) + " s";
    return v;
}

// ---- criterion 8: kernel suite ----

Verdict kernel_suite() {
    const auto start = Clock::now();
    std::ostringstream details;
    bool pass = true;
    Xoshiro256pp rng(derive_seed(108, 1));

    // kernel_C degenerates to the half-plane Green function at c == 1.  Pairs
    // closer than 1e-2 are redrawn: the kernel is +inf on the diagonal and
    // the absolute 1e-12 budget would be spent on log cancellation, not on
    // the identity under test.
    const auto draw_point = [&rng] {
        return std::complex<double>(4.0 * rng.uniform01() - 2.0, 0.05 + 2.0 * rng.uniform01());
    };
    const CovarianceFn one = CovarianceFn::constant(1.0);
    double worst_green = 0.0;
    for (int i = 0; i < 10000; ++i) {
        std::complex<double> z = draw_point(), w = draw_point();
        while (std::abs(z - w) < 1e-2) w = draw_point();
        const double k = kernel_c(z, rng.uniform01(), w, rng.uniform01(), one);
        worst_green = std::max(worst_green, std::abs(k - green_halfplane(z, w)));
    }
    pass = pass && worst_green <= 1e-12;
    details << "green agreement on 10000 pairs, max " << fmt(worst_green) << " (<=1e-12)";

    // Decay to zero at the boundary, monotone along a shrinking Im z.
    const CovarianceFn ou = CovarianceFn::ornstein_uhlenbeck(1.0);
    double boundary_worst = 0.0;
    bool monotone = true;
    for (double x : {-1.5, -0.2, 0.4, 1.1}) {
        double previous = 1e300;
        for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
            const double k =
                std::abs(kernel_c({x, eps}, 0.0, {0.3, 0.9}, 0.5, ou));
            if (k >= previous) monotone = false;
            previous = k;
            if (eps == 1e-8) boundary_worst = std::max(boundary_worst, k);
        }
    }
    pass = pass && monotone && boundary_worst <= 1e-6;
    details << "; boundary decay max " << fmt(boundary_worst) << " at Im z=1e-8 (<=1e-6)";

    // Positive definiteness: mollified Gram matrices on random configurations.
    double min_eig = 1e300;
    for (int config = 0; config < 20; ++config) {
        std::vector<std::pair<std::complex<double>, double>> points;
        for (int i = 0; i < 10; ++i) points.emplace_back(draw_point(), rng.uniform01());
        const CovarianceFn cov = config % 2 == 0
                                     ? CovarianceFn::ornstein_uhlenbeck(0.3 + 1.7 * rng.uniform01())
                                     : CovarianceFn::constant(0.3 + 0.69 * rng.uniform01());
        min_eig = std::min(min_eig, gram_pd_check(points, cov, 0.05));
    }
    pass = pass && min_eig >= -1e-9;
    details << "; gram min eigenvalue " << fmt(min_eig) << " (>=-1e-9)";

    // GFF on monotone sections: OU covariances are multiplicative along
    // increasing time profiles, so the pullback identity applies exactly.
    double pullback_worst = 0.0;
    bool applicable = true;
    const std::vector<std::pair<double, double>> section_points = [] {
        std::vector<std::pair<double, double>> pts;
        for (double x : {-0.6, 0.0, 0.8})
            for (double t : {0.0, 0.3, 0.7, 1.0}) pts.emplace_back(x, t);
        return pts;
    }();
    for (double rate : {0.5, 1.0, 2.0}) {
        SectionSpec sec;
        sec.covariance = CovarianceFn::ornstein_uhlenbeck(rate);
        sec.phi = [](double t) { return 1.0 / (1.0 + 0.5 * t); };
        sec.psi = [](double t) { return 0.25 + 0.5 * t; };
        const auto report = section_pullback_check(sec, section_points);
        applicable = applicable && report.applicable;
        pullback_worst = std::max(pullback_worst, report.max_discrepancy);
    }
    pass = pass && applicable && pullback_worst <= 1e-10;
    details << "; section pullback max " << fmt(pullback_worst) << " (<=1e-10), "
            << fmt(seconds_since(start)) << " s";

    return {pass, details.str()};
}

// ---- criterion 9: universality under frozen three-point entries ----

Verdict universality() {
    static const RunOutput run = run_and_compare(static_config(EntryFamily::FrozenThreePoint, 105));
    const auto all = summarize_rows(run, [](const ObservableSpec&) { return true; });
    int gauss_failed = 0;
    for (const auto& g : run.report.gaussianity)
        if (!g.pass) ++gauss_failed;
    Verdict v;
    v.pass = all.n_rows == 6 && all.n_failed == 0;
    v.details = std::to_string(all.n_rows) + " pairs under three-point entries, max|z| " +
                fmt(all.max_abs_z) + " (<=5), gaussianity rows failing: " +
                std::to_string(gauss_failed) + ", " + fmt(run.elapsed) + " s";
    return v;
}

struct Criterion {
    int number;
    const char* name;
    Verdict (*run)();
};

const Criterion kCriteria[] = {
    {1, "theory-evaluator agreement", evaluator_agreement},
    {2, "exact combinatorics", exact_combinatorics},
    {3, "static GOE variances", goe_static},
    {4, "dynamic OU nested covariances", dynamic_nested},
    {5, "chebyshev decorrelation and autocorrelation", chebyshev_structure},
    {6, "gaussianity of all coordinates", gaussianity},
    {7, "height/trace identity", height_trace_identity},
    {8, "kernel suite", kernel_suite},
    {9, "universality (three-point entries)", universality},
};

}  // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) {
        char* end = nullptr;
        const long n = std::strtol(argv[i], &end, 10);
        if (end == argv[i] || *end != '\0' || n < 1 || n > 9) {
            std::cerr << "usage: " << argv[0] << " [criterion numbers 1-9]\n";
            return 2;
        }
        wanted.insert(static_cast<int>(n));
    }
    if (wanted.empty())
        for (const auto& c : kCriteria) wanted.insert(c.number);

    int failed = 0;
    for (const auto& c : kCriteria) {
        if (!wanted.count(c.number)) continue;
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v.pass = false;
            v.details = std::string("exception: ") + e.what();
        }
        if (!v.pass) ++failed;
        std::cout << "criterion " << c.number << " " << c.name << ": "
                  << (v.pass ? "PASS" : "FAIL") << " (" << v.details << ")" << std::endl;
    }
    std::cout << wanted.size() - failed << "/" << wanted.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
