"""End-to-end smoke tests for the python bindings.

Each test drives one bound surface with targets that are exact or generous
enough to be flake-free: exact combinatorial identities, the two quadrature
evaluators against the series, the section pullback identity, and one small
Monte Carlo run compared against the limiting covariance.
"""

import json
import math

import pytest

import dysonclt


def test_version():
    assert dysonclt.__version__ == "0.1.0"


def test_exact_combinatorics():
    assert dysonclt.binomial(10, 3) == 120
    assert dysonclt.binomial(3, 7) == 0
    assert dysonclt.catalan(4) == 14
    # r = 2, S = 3: C0 C3 + C1 C2 + C2 C1 + C3 C0 = 5 + 2 + 2 + 5.
    assert dysonclt.catalan_convolution(2, 3) == 14
    assert dysonclt.chebyshev_coefficients(3) == [0, -3, 0, 4]
    # Degree 40 overflows doubles and int64; the boundary must carry it exactly.
    assert dysonclt.binomial(80, 40) == math.comb(80, 40)


def test_evaluator_agreement():
    q = dict(k_p=2, k_q=2, b_p=1.0, b_q=1.0, b_pq=0.5, c=0.8, beta=1)
    series = dysonclt.covariance_series(**q)
    contour = dysonclt.covariance_contour(**q)
    logkernel = dysonclt.covariance_logkernel(**q)
    assert abs(contour - series) <= 1e-8 * (1.0 + abs(series))
    assert abs(logkernel - series) <= 1e-5 * (1.0 + abs(series))
    # Degree-one traces: exactly (2/beta) c b_pq.
    assert dysonclt.covariance_series(1, 1, b_pq=0.5, c=0.8, beta=2) == 0.8 * 0.5


def test_chebyshev_closed_form():
    # k = 1 is the rescaled trace: c b_pq / (2 sqrt(b_p b_q)) at beta 1.
    got = dysonclt.chebyshev_covariance_closed(1, 1, 1.0, 0.25, 0.25, 0.6, 1)
    assert got == pytest.approx(0.6 * 0.25 / (2.0 * 0.5), abs=1e-15)
    # Distinct degrees are exactly uncorrelated.
    assert dysonclt.chebyshev_covariance_closed(2, 3, 1.0, 1.0, 1.0, 1.0, 1) == 0.0
    closed = dysonclt.chebyshev_covariance_closed(3, 3, 1.0, 1.0, 1.0, 0.7, 2)
    expanded = dysonclt.chebyshev_covariance_expanded(3, 3, 1.0, 1.0, 1.0, 0.7, 2)
    assert expanded == pytest.approx(closed, abs=1e-12)


def test_omega_roundtrip():
    z = dysonclt.omega(0.6, 1.3)
    assert z.imag > 0.0
    assert abs(z) ** 2 == pytest.approx(1.3, abs=1e-14)
    x, y = dysonclt.omega_inv(z)
    assert x == pytest.approx(0.6, abs=1e-14)
    assert y == pytest.approx(1.3, abs=1e-14)
    with pytest.raises(ValueError):
        dysonclt.omega(10.0, 1.0)


def test_section_pullback_with_python_profiles():
    # Shrinking matrix along an OU flow; psi = id makes the OU covariance
    # multiplicative along the section, so the identity applies.
    sec = dysonclt.SectionSpec(
        phi=lambda t: 1.0 - 0.2 * t,
        psi=lambda t: t,
        t0=0.0,
        covariance=dysonclt.CovarianceFn.ornstein_uhlenbeck(1.0),
    )
    zeta = dysonclt.xi(0.4, 0.3, sec)
    x, t = dysonclt.xi_inv(zeta, sec)
    assert x == pytest.approx(0.4, abs=1e-9)
    assert t == pytest.approx(0.3, abs=1e-9)

    points = [(x, t) for x in (-0.5, 0.0, 0.7) for t in (0.0, 0.25, 0.6)]
    report = dysonclt.section_pullback_check(sec, points)
    assert report.applicable
    assert report.max_discrepancy <= 1e-10


def test_kernel_and_gram():
    cov = dysonclt.CovarianceFn.ornstein_uhlenbeck(0.5)
    z, w = complex(0.3, 0.8), complex(-0.4, 1.1)
    # Symmetry under swapping the two marked points.
    assert dysonclt.kernel_c(z, 0.0, w, 0.7, cov) == pytest.approx(
        dysonclt.kernel_c(w, 0.7, z, 0.0, cov), abs=1e-15
    )
    assert dysonclt.green_halfplane(z, w) > 0.0
    points = [(complex(0.1 * i - 0.2, 0.6 + 0.15 * i), 0.2 * i) for i in range(5)]
    assert dysonclt.gram_pd_check(points, cov, 0.05) >= -1e-9


def test_statistics():
    a = [1.0, 2.0, 3.0, 4.0, 5.0]
    est = dysonclt.covariance_with_jackknife(a, [2.0 * x for x in a])
    assert est.value == pytest.approx(5.0, abs=1e-15)
    cum = dysonclt.estimate_cumulants([7.3] * 50)
    assert cum.kappa3 == 0.0 and cum.kappa4 == 0.0
    assert dysonclt.pairwise_sum([0.1] * 10) == pytest.approx(1.0, abs=1e-15)


def small_config(n_samples=400, seed=7):
    return json.dumps(
        {
            "schema": 1,
            "L": 32,
            "beta": 1,
            "entry_process": {
                "family": "gaussian",
                "covariance": {"kind": "constant", "value": 1.0},
            },
            "times": [0.0],
            "sets": {"full": {"prefix": 32}},
            "observables": [
                {"set": "full", "time": 0.0, "statistic": "trace_power", "k": 1},
                {"set": "full", "time": 0.0, "statistic": "trace_power", "k": 2},
            ],
            "n_samples": n_samples,
            "seed": seed,
        }
    )


def test_config_pipeline_round_trip():
    cfg = dysonclt.parse_experiment_config(small_config())
    assert cfg.L == 32 and cfg.beta == 1 and cfg.n_samples == 400
    assert [dysonclt.observable_label(o) for o in cfg.observables] == [
        "full@t0:pow1",
        "full@t0:pow2",
    ]
    est = dysonclt.run_experiment(cfg)
    assert est.n_samples == 400 and est.n_quarantined == 0
    assert est.covariance.shape == (2, 2)
    # Variance of the normalized trace is exactly 2/beta at every L.
    assert dysonclt.theory_covariance(cfg.observables[0], cfg.observables[0], cfg) == 2.0
    report = dysonclt.compare(est, cfg)
    assert report.all_pass()
    assert {row.pass_ for row in report.rows} == {True}
    # Same seed, same estimates, bit for bit.
    again = dysonclt.run_experiment(cfg)
    assert again.means == est.means


def test_config_rejection():
    with pytest.raises(dysonclt.ConfigError, match="/schema"):
        dysonclt.parse_experiment_config(small_config().replace('"schema": 1', '"schema": 2'))
    with pytest.raises(dysonclt.ConfigError):
        dysonclt.load_experiment_config("/nonexistent/config.json")


def test_programmatic_config():
    entry = dysonclt.EntryProcessSpec()
    entry.beta = 2
    cfg = dysonclt.ExperimentConfig()
    cfg.L = 24
    cfg.entry = entry
    cfg.times = [0.0]
    cfg.sets = {"full": dysonclt.IndexSet.prefix(24)}
    cfg.observables = [dysonclt.ObservableSpec("full", 0.0, dysonclt.StatisticKind.TracePower, 1)]
    cfg.n_samples = 300
    cfg.seed = 11
    cfg.validate()
    est = dysonclt.run_experiment(cfg)
    report = dysonclt.compare(est, cfg)
    assert report.all_pass()
    # GUE halves the variance: 2/beta = 1.
    assert dysonclt.theory_covariance(cfg.observables[0], cfg.observables[0], cfg) == 1.0


def test_eigen_observable_bridge():
    numpy = pytest.importorskip("numpy")
    mat = numpy.array([[2.0, 1.0], [1.0, 2.0]])
    eigs = dysonclt.eigenvalues(mat)
    assert eigs == pytest.approx([1.0, 3.0], abs=1e-12)
    assert dysonclt.trace_power(eigs, 2) == pytest.approx(10.0, abs=1e-12)
    assert dysonclt.chebyshev_T(5, 0.3) == pytest.approx(
        math.cos(5 * math.acos(0.3)), abs=1e-13
    )
