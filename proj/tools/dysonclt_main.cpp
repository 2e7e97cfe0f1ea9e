#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dysonclt/config.hpp"
#include "dysonclt/kernel.hpp"
#include "dysonclt/montecarlo.hpp"
#include "dysonclt/observables.hpp"
#include "dysonclt/stats.hpp"
#include "dysonclt/theory.hpp"

namespace {

using namespace dysonclt;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "both";
    std::uint64_t seed = 0;
    int samples = 0;
    int threads = 0;
    int scale = 0;
    bool dump_samples = false;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* samples_opt = nullptr;
    CLI::Option* threads_opt = nullptr;
    CLI::Option* scale_opt = nullptr;
};

void add_common(CLI::App* cmd, CliOptions& o, bool config_required) {
    auto* config = cmd->add_option("--config", o.config_path, "Config JSON path");
    if (config_required) config->required();
    cmd->add_option("--out", o.out_dir, "Output directory (created if missing)");
    cmd->add_option("--format", o.format, "Artifact format")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    o.seed_opt = cmd->add_option("--seed", o.seed, "Override the config seed");
    o.samples_opt = cmd->add_option("--samples", o.samples, "Override n_samples");
    o.threads_opt = cmd->add_option("--threads", o.threads, "Override worker threads");
    o.scale_opt = cmd->add_option("--L", o.scale, "Override the scale L");
}

ExperimentConfig load_with_overrides(const CliOptions& o) {
    ExperimentConfig cfg = load_experiment_config(o.config_path);
    if (o.seed_opt && o.seed_opt->count()) cfg.seed = o.seed;
    if (o.samples_opt && o.samples_opt->count()) cfg.n_samples = o.samples;
    if (o.threads_opt && o.threads_opt->count()) cfg.threads = o.threads;
    if (o.scale_opt && o.scale_opt->count()) cfg.L = o.scale;
    cfg.validate();
    return cfg;
}

bool want_csv(const CliOptions& o) { return o.format != "json"; }
bool want_json(const CliOptions& o) { return o.format != "csv"; }

std::ofstream open_artifact(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(std::filesystem::path(dir) / name);
    if (!out) throw std::runtime_error("cannot open " + name + " for writing in " + dir);
    out << std::setprecision(17);
    return out;
}

void write_json_artifact(const CliOptions& o, const std::string& name, const json& j) {
    std::ofstream out = open_artifact(o.out_dir, name);
    out << j.dump(2) << '\n';
    std::cout << "wrote " << (std::filesystem::path(o.out_dir) / name).string() << '\n';
}

std::string metadata_comment(std::uint64_t seed, int L, int n_samples) {
    std::ostringstream os;
    os << "# seed=" << seed << " L=" << L << " n_samples=" << n_samples
       << " version=" << kVersion;
    return os.str();
}

void announce_csv(const CliOptions& o, const std::string& name) {
    std::cout << "wrote " << (std::filesystem::path(o.out_dir) / name).string() << '\n';
}

CovarianceQuery query_for(const ObservableSpec& a, const ObservableSpec& b,
                          const ExperimentConfig& cfg) {
    const OverlapFractions f =
        overlap_fraction(cfg.sets.at(a.set_id), cfg.sets.at(b.set_id), static_cast<double>(cfg.L));
    return {a.k,    b.k, f.b_p, f.b_q, f.b_pq, cfg.entry.covariance.evaluate(a.time, b.time),
            cfg.beta()};
}

// ---------------------------------------------------------------------------
// theory: limiting covariance tables through every applicable evaluator.

int cmd_theory(const CliOptions& o) {
    const ExperimentConfig cfg = load_with_overrides(o);
    const int m = static_cast<int>(cfg.observables.size());

    struct Row {
        int p, q;
        std::string method;
        double value;
    };
    std::vector<Row> rows;
    for (int p = 0; p < m; ++p) {
        for (int q = p; q < m; ++q) {
            const ObservableSpec& a = cfg.observables[static_cast<std::size_t>(p)];
            const ObservableSpec& b = cfg.observables[static_cast<std::size_t>(q)];
            const bool a_trace = a.statistic == StatisticKind::TracePower;
            const bool b_trace = b.statistic == StatisticKind::TracePower;
            if (a_trace && b_trace) {
                const CovarianceQuery query = query_for(a, b, cfg);
                rows.push_back({p, q, "series", covariance_series(query)});
                rows.push_back({p, q, "contour", covariance_contour(query)});
                rows.push_back({p, q, "logkernel", covariance_logkernel(query)});
            } else if (!a_trace && !b_trace) {
                const CovarianceQuery query = query_for(a, b, cfg);
                rows.push_back({p, q, "closed",
                                chebyshev_covariance_closed(query.k_p, query.k_q, query.b_p,
                                                            query.b_q, query.b_pq, query.c,
                                                            query.beta)});
                rows.push_back({p, q, "expanded",
                                chebyshev_covariance_expanded(query.k_p, query.k_q, query.b_p,
                                                              query.b_q, query.b_pq, query.c,
                                                              query.beta)});
            } else {
                rows.push_back({p, q, "expansion", theory_covariance(a, b, cfg)});
            }
        }
    }

    if (want_csv(o)) {
        std::ofstream out = open_artifact(o.out_dir, "theory.csv");
        out << metadata_comment(cfg.seed, cfg.L, cfg.n_samples) << '\n';
        out << "p,q,label_p,label_q,method,value\n";
        for (const Row& r : rows)
            out << r.p << ',' << r.q << ','
                << observable_label(cfg.observables[static_cast<std::size_t>(r.p)]) << ','
                << observable_label(cfg.observables[static_cast<std::size_t>(r.q)]) << ','
                << r.method << ',' << r.value << '\n';
        announce_csv(o, "theory.csv");
    }
    if (want_json(o)) {
        json j;
        j["version"] = kVersion;
        j["L"] = cfg.L;
        j["beta"] = cfg.beta();
        j["rows"] = json::array();
        for (const Row& r : rows)
            j["rows"].push_back(
                {{"p", r.p},
                 {"q", r.q},
                 {"label_p", observable_label(cfg.observables[static_cast<std::size_t>(r.p)])},
                 {"label_q", observable_label(cfg.observables[static_cast<std::size_t>(r.q)])},
                 {"method", r.method},
                 {"value", r.value}});
        write_json_artifact(o, "theory.json", j);
    }
    std::cout << "theory: " << rows.size() << " evaluator rows over " << m * (m + 1) / 2
              << " pairs\n";
    return 0;
}

// ---------------------------------------------------------------------------
// simulate: run the Monte Carlo experiment and emit the estimate table.

json cumulant_json(const CumulantEstimate& c) {
    return {{"kappa3", c.kappa3},
            {"kappa3_stderr", c.kappa3_stderr},
            {"kappa4", c.kappa4},
            {"kappa4_stderr", c.kappa4_stderr}};
}

int cmd_simulate(const CliOptions& o) {
    const ExperimentConfig cfg = load_with_overrides(o);
    const EstimateTable table = run_experiment(cfg);
    const int m = static_cast<int>(table.labels.size());

    if (want_csv(o)) {
        std::ofstream pairs = open_artifact(o.out_dir, "estimates.csv");
        pairs << metadata_comment(cfg.seed, cfg.L, cfg.n_samples) << '\n';
        pairs << "p,q,label_p,label_q,covariance,std_error\n";
        for (int p = 0; p < m; ++p)
            for (int q = p; q < m; ++q)
                pairs << p << ',' << q << ',' << table.labels[static_cast<std::size_t>(p)] << ','
                      << table.labels[static_cast<std::size_t>(q)] << ',' << table.covariance(p, q)
                      << ',' << table.covariance_stderr(p, q) << '\n';
        announce_csv(o, "estimates.csv");

        std::ofstream coords = open_artifact(o.out_dir, "coordinates.csv");
        coords << metadata_comment(cfg.seed, cfg.L, cfg.n_samples) << '\n';
        coords << "p,label,mean,kappa3,kappa3_stderr,kappa4,kappa4_stderr\n";
        for (int p = 0; p < m; ++p) {
            const CumulantEstimate& c = table.cumulants[static_cast<std::size_t>(p)];
            coords << p << ',' << table.labels[static_cast<std::size_t>(p)] << ','
                   << table.means[static_cast<std::size_t>(p)] << ',' << c.kappa3 << ','
                   << c.kappa3_stderr << ',' << c.kappa4 << ',' << c.kappa4_stderr << '\n';
        }
        announce_csv(o, "coordinates.csv");
    }
    if (want_json(o)) {
        json j;
        j["version"] = kVersion;
        j["seed"] = table.seed;
        j["L"] = cfg.L;
        j["n_samples"] = table.n_samples;
        j["n_quarantined"] = table.n_quarantined;
        j["labels"] = table.labels;
        j["means"] = table.means;
        json cov = json::array(), err = json::array();
        for (int p = 0; p < m; ++p) {
            json cov_row = json::array(), err_row = json::array();
            for (int q = 0; q < m; ++q) {
                cov_row.push_back(table.covariance(p, q));
                err_row.push_back(table.covariance_stderr(p, q));
            }
            cov.push_back(cov_row);
            err.push_back(err_row);
        }
        j["covariance"] = cov;
        j["covariance_stderr"] = err;
        j["cumulants"] = json::array();
        for (const CumulantEstimate& c : table.cumulants) j["cumulants"].push_back(cumulant_json(c));
        write_json_artifact(o, "estimates.json", j);
    }
    if (o.dump_samples) {
        std::ofstream dump = open_artifact(o.out_dir, "samples.csv");
        dump << metadata_comment(cfg.seed, cfg.L, cfg.n_samples) << '\n';
        for (int p = 0; p < m; ++p) dump << (p ? "," : "") << table.labels[static_cast<std::size_t>(p)];
        dump << '\n';
        for (int i = 0; i < table.n_samples; ++i) {
            for (int p = 0; p < m; ++p)
                dump << (p ? "," : "")
                     << table.samples[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)];
            dump << '\n';
        }
        announce_csv(o, "samples.csv");
    }
    std::cout << "simulate: " << m << " observables, " << table.n_samples << " samples retained, "
              << table.n_quarantined << " quarantined\n";
    return 0;
}

// ---------------------------------------------------------------------------
// compare: simulate + theory + z-score verdicts; exit 1 on any failure.

int cmd_compare(const CliOptions& o) {
    const ExperimentConfig cfg = load_with_overrides(o);
    const auto started = std::chrono::steady_clock::now();
    const EstimateTable table = run_experiment(cfg);
    ComparisonReport report = compare(table, cfg);
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (want_csv(o)) {
        std::ofstream pairs = open_artifact(o.out_dir, "report.csv");
        pairs << metadata_comment(report.seed, report.L, report.n_samples) << '\n';
        pairs << "p,q,label_p,label_q,theory,empirical,std_error,z,verdict\n";
        for (const ComparisonRow& r : report.rows)
            pairs << r.p << ',' << r.q << ',' << r.label_p << ',' << r.label_q << ',' << r.theory
                  << ',' << r.empirical << ',' << r.std_error << ',' << r.z << ','
                  << (r.pass ? "pass" : "FAIL") << '\n';
        announce_csv(o, "report.csv");

        std::ofstream gauss = open_artifact(o.out_dir, "gaussianity.csv");
        gauss << metadata_comment(report.seed, report.L, report.n_samples) << '\n';
        gauss << "p,label,kappa3,kappa3_stderr,z3,kappa4,kappa4_stderr,z4,verdict\n";
        for (const GaussianityRow& g : report.gaussianity)
            gauss << g.p << ',' << g.label << ',' << g.kappa3 << ',' << g.kappa3_stderr << ','
                  << g.z3 << ',' << g.kappa4 << ',' << g.kappa4_stderr << ',' << g.z4 << ','
                  << (g.pass ? "pass" : "FAIL") << '\n';
        announce_csv(o, "gaussianity.csv");
    }
    if (want_json(o)) {
        json j;
        j["version"] = kVersion;
        j["seed"] = report.seed;
        j["L"] = report.L;
        j["n_samples"] = report.n_samples;
        j["n_quarantined"] = report.n_quarantined;
        j["z_max"] = report.z_max;
        j["runtime_seconds"] = report.runtime_seconds;
        j["all_pass"] = report.all_pass();
        j["pairs"] = json::array();
        for (const ComparisonRow& r : report.rows)
            j["pairs"].push_back({{"p", r.p},
                                  {"q", r.q},
                                  {"label_p", r.label_p},
                                  {"label_q", r.label_q},
                                  {"theory", r.theory},
                                  {"empirical", r.empirical},
                                  {"std_error", r.std_error},
                                  {"z", r.z},
                                  {"pass", r.pass}});
        j["gaussianity"] = json::array();
        for (const GaussianityRow& g : report.gaussianity)
            j["gaussianity"].push_back({{"p", g.p},
                                        {"label", g.label},
                                        {"kappa3", g.kappa3},
                                        {"kappa3_stderr", g.kappa3_stderr},
                                        {"z3", g.z3},
                                        {"kappa4", g.kappa4},
                                        {"kappa4_stderr", g.kappa4_stderr},
                                        {"z4", g.z4},
                                        {"pass", g.pass}});
        write_json_artifact(o, "report.json", j);
    }

    std::cout << std::setprecision(6);
    for (const ComparisonRow& r : report.rows)
        std::cout << (r.pass ? "  pass  " : "  FAIL  ") << r.label_p << " x " << r.label_q
                  << ": theory " << r.theory << ", empirical " << r.empirical << " +- "
                  << r.std_error << " (z = " << r.z << ")\n";
    for (const GaussianityRow& g : report.gaussianity)
        std::cout << (g.pass ? "  pass  " : "  FAIL  ") << g.label << ": kappa3 " << g.kappa3
                  << " (z = " << g.z3 << "), excess kappa4 " << g.kappa4 << " (z = " << g.z4
                  << ")\n";
    const bool ok = report.all_pass();
    std::cout << "compare: " << (ok ? "all pass" : "VERDICT FAILURE") << " in "
              << report.runtime_seconds << " s\n";
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// kernel: kernel/Green values and section-map grids, plus the pullback check.

struct KernelGrid {
    double rate = 1.0;
    double t0 = 0.0;
    std::vector<double> x_values{-1.8, -1.2, -0.6, 0.0, 0.6, 1.2, 1.8};
    std::vector<double> y_values{0.4, 1.0, 1.6};
    std::vector<double> t_values{-1.0, -0.5, 0.0, 0.5, 1.0};
    std::vector<double> pair_times{0.0, 0.5};
};

KernelGrid load_kernel_grid(const std::string& path) {
    KernelGrid grid;
    if (path.empty()) return grid;
    std::ifstream in(path);
    if (!in) throw ConfigError("/", "cannot read config file: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("/", std::string("not valid JSON: ") + e.what());
    }
    if (root.value("schema", 0) != 1) throw ConfigError("/schema", "unsupported schema version");
    if (!root.contains("kernel")) throw ConfigError("/kernel", "missing kernel section");
    const json& k = root["kernel"];
    const auto numbers = [](const json& v, const char* where) {
        if (!v.is_array() || v.empty())
            throw ConfigError(std::string("/kernel/") + where, "must be a non-empty number array");
        return v.get<std::vector<double>>();
    };
    if (k.contains("rate")) grid.rate = k["rate"].get<double>();
    if (k.contains("t0")) grid.t0 = k["t0"].get<double>();
    if (k.contains("x_values")) grid.x_values = numbers(k["x_values"], "x_values");
    if (k.contains("y_values")) grid.y_values = numbers(k["y_values"], "y_values");
    if (k.contains("t_values")) grid.t_values = numbers(k["t_values"], "t_values");
    if (k.contains("pair_times")) grid.pair_times = numbers(k["pair_times"], "pair_times");
    if (!(grid.rate > 0.0)) throw ConfigError("/kernel/rate", "must be positive");
    return grid;
}

int cmd_kernel(const CliOptions& o) {
    const KernelGrid grid = load_kernel_grid(o.config_path);
    const CovarianceFn ou = CovarianceFn::ornstein_uhlenbeck(grid.rate);

    // The canonical monotone section: fixed unit matrix-size profile, time
    // moving with the clock, OU entry covariance.
    SectionSpec section;
    section.phi = [](double) { return 1.0; };
    section.psi = [](double t) { return t; };
    section.t0 = grid.t0;
    section.covariance = ou;

    std::vector<std::complex<double>> lattice;
    for (double x : grid.x_values)
        for (double y : grid.y_values) lattice.emplace_back(x, y);

    if (want_csv(o)) {
        std::ofstream out = open_artifact(o.out_dir, "kernel.csv");
        out << metadata_comment(0, 0, 0) << '\n';
        out << "re_z,im_z,s,re_w,im_w,t,kernel_c,green\n";
        for (const std::complex<double>& z : lattice)
            for (const std::complex<double>& w : lattice)
                for (double t : grid.pair_times) {
                    const double s = grid.pair_times.front();
                    out << z.real() << ',' << z.imag() << ',' << s << ',' << w.real() << ','
                        << w.imag() << ',' << t << ',' << kernel_c(z, s, w, t, ou) << ','
                        << green_halfplane(z, w) << '\n';
                }
        announce_csv(o, "kernel.csv");

        std::ofstream maps = open_artifact(o.out_dir, "maps.csv");
        maps << metadata_comment(0, 0, 0) << '\n';
        maps << "x,t,omega_re,omega_im,xi_re,xi_im,roundtrip_error\n";
        for (double x : grid.x_values)
            for (double t : grid.t_values) {
                const std::complex<double> om = omega(x, 1.0);
                const std::complex<double> zeta = xi(x, t, section);
                const auto [x_back, t_back] = xi_inv(zeta, section);
                const double roundtrip =
                    std::max(std::abs(x_back - x), std::abs(t_back - t));
                maps << x << ',' << t << ',' << om.real() << ',' << om.imag() << ','
                     << zeta.real() << ',' << zeta.imag() << ',' << roundtrip << '\n';
            }
        announce_csv(o, "maps.csv");
    }

    std::vector<std::pair<double, double>> points;
    for (double x : grid.x_values)
        for (double t : grid.t_values) points.emplace_back(x, t);
    const PullbackReport pullback = section_pullback_check(section, points);

    if (want_json(o)) {
        json j;
        j["version"] = kVersion;
        j["rate"] = grid.rate;
        j["t0"] = grid.t0;
        j["pullback"] = {{"applicable", pullback.applicable},
                         {"max_discrepancy", pullback.max_discrepancy},
                         {"points", points.size()}};
        write_json_artifact(o, "kernel.json", j);
    }

    const bool ok = !pullback.applicable || pullback.max_discrepancy <= 1e-10;
    std::cout << "kernel: pullback over " << points.size() << " section points: ";
    if (pullback.applicable)
        std::cout << "max discrepancy " << pullback.max_discrepancy;
    else
        std::cout << "inapplicable covariance";
    std::cout << (ok ? " (pass)" : " (FAIL)") << '\n';
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// selftest: deterministic identities across every module, zero sampling.

struct SelftestHarness {
    int checked = 0;
    int failed = 0;

    void require(bool ok, const std::string& what) {
        ++checked;
        if (!ok) {
            ++failed;
            std::cout << "  FAIL: " << what << '\n';
        }
    }
    void block(const std::string& name, int before) const {
        std::cout << "  " << name << ": " << (checked - before) << " identities\n";
    }
};

// Coefficients of (sum_{s<=S} C_s x^s)^r, truncated at degree S: the brute
// counterpart of the closed-form Catalan convolution.
BigInt convolution_by_powers(int r, int S) {
    std::vector<BigInt> poly(static_cast<std::size_t>(S) + 1, 0);
    poly[0] = 1;
    std::vector<BigInt> base(static_cast<std::size_t>(S) + 1);
    for (int s = 0; s <= S; ++s) base[static_cast<std::size_t>(s)] = catalan(s);
    for (int rep = 0; rep < r; ++rep) {
        std::vector<BigInt> next(static_cast<std::size_t>(S) + 1, 0);
        for (int i = 0; i <= S; ++i)
            for (int j = 0; i + j <= S; ++j) next[static_cast<std::size_t>(i + j)] +=
                poly[static_cast<std::size_t>(i)] * base[static_cast<std::size_t>(j)];
        poly = next;
    }
    return poly[static_cast<std::size_t>(S)];
}

int cmd_selftest() {
    SelftestHarness h;
    std::cout << "selftest (pure identities, no sampling)\n";

    {
        const int before = h.checked;
        for (int n = 1; n <= 24; ++n)
            for (int k = 1; k < n; ++k)
                h.require(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k),
                          "Pascal recurrence");
        for (int n = 2; n < 15; ++n) {
            BigInt acc = 0;
            for (int i = 0; i < n; ++i) acc += catalan(i) * catalan(n - 1 - i);
            h.require(catalan(n) == acc, "Catalan recurrence");
        }
        for (int r = 1; r <= 8; ++r)
            for (int S = 0; S <= 10; ++S)
                h.require(catalan_convolution(r, S) == convolution_by_powers(r, S),
                          "Catalan convolution closed form");
        h.block("combinatorics", before);
    }

    {
        const int before = h.checked;
        h.require(covariance_series({1, 1, 1, 1, 1, 1, 1}) == 2.0, "series k=1 GOE");
        h.require(covariance_series({2, 2, 1, 1, 1, 1, 1}) == 4.0, "series k=2 GOE");
        h.require(covariance_series({3, 3, 1, 1, 1, 1, 1}) == 24.0, "series k=3 GOE");
        h.require(covariance_series({2, 2, 1, 1, 1, 1, 2}) == 2.0, "series k=2 GUE");
        h.require(covariance_series({1, 2, 1, 1, 1, 1, 1}) == 0.0, "series parity zero");
        const double nested = covariance_series({1, 1, 1.0, 0.5, 0.5, std::exp(-0.5), 1});
        h.require(std::abs(nested - std::exp(-0.5)) < 1e-15, "series nested OU k=1");
        for (int k_p = 1; k_p <= 4; ++k_p)
            for (int k_q = 1; k_q <= 4; ++k_q) {
                const CovarianceQuery q{k_p, k_q, 0.9, 0.6, 0.4, 0.7, 1};
                h.require(covariance_series(q) == covariance_series(q.swapped()),
                          "series swap symmetry");
            }
        h.block("covariance series", before);
    }

    {
        const int before = h.checked;
        const std::vector<std::array<double, 3>> fractions{{1.0, 1.0, 1.0}, {1.0, 0.5, 0.5}};
        for (const auto& f : fractions)
            for (int beta : {1, 2})
                for (double c : {0.3, 1.0})
                    for (int k_p = 1; k_p <= 3; ++k_p)
                        for (int k_q = 1; k_q <= 3; ++k_q) {
                            const CovarianceQuery q{k_p, k_q, f[0], f[1], f[2], c, beta};
                            const double series = covariance_series(q);
                            const double contour = covariance_contour(q);
                            const double logk = covariance_logkernel(q);
                            const double scale = 1.0 + std::abs(series);
                            h.require(std::abs(series - contour) <= 1e-8 * scale,
                                      "series vs contour");
                            h.require(std::abs(series - logk) <= 1e-5 * scale,
                                      "series vs logkernel");
                        }
        h.block("evaluator agreement", before);
    }

    {
        const int before = h.checked;
        for (int beta : {1, 2})
            for (int k = 1; k <= 8; ++k) {
                const double closed =
                    chebyshev_covariance_closed(k, k, 1.0, 0.5, 0.5, 0.8, beta);
                const double expanded =
                    chebyshev_covariance_expanded(k, k, 1.0, 0.5, 0.5, 0.8, beta);
                h.require(std::abs(closed - expanded) <= 1e-10 * (1.0 + std::abs(closed)),
                          "Chebyshev closed vs expanded");
            }
        for (int k_p = 1; k_p <= 4; ++k_p)
            for (int k_q = 1; k_q <= 4; ++k_q)
                if (k_p != k_q)
                    h.require(chebyshev_covariance_closed(k_p, k_q, 1, 1, 1, 1, 1) == 0.0,
                              "Chebyshev delta structure");
        for (int k = 0; k <= 10; ++k)
            for (double x : {-0.9, -0.3, 0.2, 0.7, 1.0}) {
                h.require(std::abs(chebyshev_T(k, x) - std::cos(k * std::acos(x))) <= 1e-12,
                          "Chebyshev trig form");
            }
        for (int k = 1; k <= 6; ++k)
            for (double x : {1.3, 2.4}) {
                const double hyp = std::cosh(k * std::acosh(x));
                h.require(std::abs(chebyshev_T(k, x) - hyp) <= 1e-10 * hyp,
                          "Chebyshev hyperbolic continuation");
            }
        h.block("Chebyshev forms", before);
    }

    {
        const int before = h.checked;
        const CovarianceFn one = CovarianceFn::constant(1.0);
        std::vector<std::complex<double>> pts;
        for (double x : {-1.5, -0.5, 0.5, 1.5})
            for (double y : {0.3, 1.0, 1.7}) pts.emplace_back(x, y);
        for (const auto& z : pts)
            for (const auto& w : pts) {
                if (z == w) continue;
                h.require(std::abs(kernel_c(z, 0.0, w, 0.0, one) - green_halfplane(z, w)) <= 1e-12,
                          "kernel reduces to Green at c=1");
                h.require(kernel_c(z, 0.0, w, 1.0, one) == kernel_c(w, 1.0, z, 0.0, one),
                          "kernel swap symmetry");
            }
        const auto [x0, y0] = omega_inv(omega(0.7, 1.3));
        h.require(std::abs(x0 - 0.7) <= 1e-14 && std::abs(y0 - 1.3) <= 1e-14, "omega roundtrip");

        SectionSpec section;
        section.phi = [](double) { return 1.0; };
        section.psi = [](double t) { return t; };
        section.covariance = CovarianceFn::ornstein_uhlenbeck(1.0);
        std::vector<std::pair<double, double>> section_points;
        for (double x : {-1.2, 0.0, 1.2})
            for (double t : {-0.75, 0.0, 0.5, 1.25}) section_points.emplace_back(x, t);
        for (const auto& [x, t] : section_points) {
            const auto [xb, tb] = xi_inv(xi(x, t, section), section);
            h.require(std::abs(xb - x) <= 1e-10 && std::abs(tb - t) <= 1e-10, "xi roundtrip");
        }
        const PullbackReport pullback = section_pullback_check(section, section_points);
        h.require(pullback.applicable && pullback.max_discrepancy <= 1e-10,
                  "GFF pullback identity on the OU section");

        h.require(gram_pd_check({{std::complex<double>(0.2, 1.0), 0.0}}, one, 0.05) > 0.0,
                  "single-point mollified Gram is positive");
        h.block("kernel and maps", before);
    }

    {
        const int before = h.checked;
        const CovarianceEstimate hand =
            covariance_with_jackknife({1.0, 2.0, 3.0, 4.0}, {2.0, 4.0, 6.0, 8.0});
        h.require(std::abs(hand.value - 10.0 / 3.0) <= 1e-14, "hand covariance");
        const CumulantEstimate flat = estimate_cumulants(std::vector<double>(64, 3.25));
        h.require(flat.kappa3 == 0.0 && flat.kappa4 == 0.0, "constant cumulants vanish");
        h.block("statistics", before);
    }

    std::cout << "selftest: " << h.checked << " identities checked, " << h.failed << " failed\n";
    return h.failed == 0 ? 0 : 1;
}

template <typename F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator and verifier for global spectral fluctuations of time-dependent "
                 "Wigner matrices and their submatrices"};
    app.require_subcommand(1);

    CliOptions theory_opts, simulate_opts, compare_opts, kernel_opts;
    CLI::App* theory = app.add_subcommand("theory", "Limiting covariance tables (all evaluators)");
    add_common(theory, theory_opts, true);
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimate table");
    add_common(simulate, simulate_opts, true);
    simulate->add_flag("--dump-samples", simulate_opts.dump_samples,
                       "Also write raw per-sample statistics");
    CLI::App* cmp = app.add_subcommand("compare", "Simulate and test against theory");
    add_common(cmp, compare_opts, true);
    CLI::App* kern = app.add_subcommand("kernel", "Kernel and section-map CSV grids");
    add_common(kern, kernel_opts, false);
    app.add_subcommand("selftest", "Deterministic identity suite (no Monte Carlo)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (app.got_subcommand("theory")) return guarded([&] { return cmd_theory(theory_opts); });
    if (app.got_subcommand("simulate")) return guarded([&] { return cmd_simulate(simulate_opts); });
    if (app.got_subcommand("compare")) return guarded([&] { return cmd_compare(compare_opts); });
    if (app.got_subcommand("kernel")) return guarded([&] { return cmd_kernel(kernel_opts); });
    return guarded([] { return cmd_selftest(); });
}
