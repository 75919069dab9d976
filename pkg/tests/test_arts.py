import math

import numpy as np
import pytest

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import IPC_AR2, random_class_alpha
from resvec.arts import (
    NON_STATIONARY,
    PAPER_CLASS,
    ROOTS_OUTSIDE,
    ARFit,
    FitError,
    TimeSeries,
    acf,
    ar_residuals,
    arch_fit,
    autocovariance,
    fit_ols,
    fit_yule_walker,
    levinson_durbin,
    load_csv,
    model_mean,
    operator_from_fit,
    pacf,
    select_order,
    simulate_ar,
    simulate_arch,
    stationarity_verdict,
    transform,
    write_csv,
)

# Seeds are fixed; see README for how they behave.
AR2_SEED = 1
ARCH_SEED = 2
WHITE_NOISE_SEED = 0


def ar_autocovariance(phi, max_lag, sigma2=1.0, n_terms=4000):
    """Autocovariances of a causal AR process from its MA(inf) weights."""
    phi = np.asarray(phi, dtype=float)
    psi = np.zeros(n_terms)
    psi[0] = 1.0
    for k in range(1, n_terms):
        for j in range(1, min(k, phi.size) + 1):
            psi[k] += phi[j - 1] * psi[k - j]
    return np.array([sigma2 * np.dot(psi[: n_terms - h], psi[h:]) for h in range(max_lag + 1)])


def test_timeseries_validates():
    with pytest.raises(ValueError):
        TimeSeries([])
    with pytest.raises(ValueError):
        TimeSeries([1.0, np.nan])


def test_load_csv_with_header(tmp_path):
    f = tmp_path / "s.csv"
    f.write_text("v\n1.0\n2.0\n")
    assert load_csv(f).values.tolist() == [1.0, 2.0]


def test_load_csv_comma_decimal(tmp_path):
    f = tmp_path / "s.csv"
    f.write_text("0,5\n")
    assert load_csv(f, decimal=",").values.tolist() == [0.5]


def test_load_csv_by_name_and_blank_lines(tmp_path):
    f = tmp_path / "s.csv"
    f.write_text("date,mwh\n2018-09-01,10.5\n\n2018-09-02,11.25\n")
    assert load_csv(f, "mwh").values.tolist() == [10.5, 11.25]
    assert load_csv(f, 1).values.tolist() == [10.5, 11.25]


def test_load_csv_semicolon_comma_locale(tmp_path):
    f = tmp_path / "s.csv"
    f.write_text("fecha;ipc\n1993-01;1,234\n1993-02;0,9\n")
    assert load_csv(f, "ipc", decimal=",").values.tolist() == [1.234, 0.9]


def test_load_csv_bad_cell_reports_row(tmp_path):
    f = tmp_path / "s.csv"
    f.write_text("v\n1.0\nabc\n")
    with pytest.raises(FitError, match="row 3"):
        load_csv(f)


def test_load_csv_empty_column(tmp_path):
    f = tmp_path / "s.csv"
    f.write_text("v\n")
    with pytest.raises(FitError, match="empty"):
        load_csv(f)


def test_load_csv_missing_name(tmp_path):
    f = tmp_path / "s.csv"
    f.write_text("v\n1\n")
    with pytest.raises(KeyError):
        load_csv(f, "w")


def test_csv_round_trip(tmp_path):
    ts = simulate_ar(IPC_AR2, 5000, seed=3)
    f = tmp_path / "ar2.csv"
    write_csv(f, ts)
    assert load_csv(f) == ts


def test_log_transform():
    out = transform(TimeSeries([1.0, math.e, math.e**2]), "log")
    np.testing.assert_allclose(out.values, [0, 1, 2], atol=1e-15)
    assert out.transforms == ("log",)


def test_log_rejects_nonpositive():
    with pytest.raises(ValueError):
        transform(TimeSeries([1.0, 0.0]), "log")


def test_first_difference():
    out = transform(TimeSeries([1, 3, 6, 10]), "diff", 1)
    assert out.values.tolist() == [2, 3, 4]
    assert out.transforms == ("diff(1)",)


def test_second_difference_composes(rng):
    ts = TimeSeries(rng.normal(size=50))
    twice = transform(transform(ts, "diff"), "diff")
    np.testing.assert_array_equal(transform(ts, "diff", 2).values, twice.values)


def test_diff_too_short():
    with pytest.raises(ValueError):
        transform(TimeSeries([1.0, 2.0]), "diff", 2)


def test_diff_then_cumsum_reconstructs(rng):
    x = rng.integers(-100, 100, 40).astype(float)
    d = transform(TimeSeries(x), "diff")
    rebuilt = np.concatenate(([x[0]], x[0] + np.cumsum(d.values)))
    np.testing.assert_array_equal(rebuilt, x)


def test_acf_white_noise():
    n = 10_000
    ts = simulate_ar([], n, seed=WHITE_NOISE_SEED)
    r = acf(ts, 10)
    assert r[0] == 1.0
    assert np.all(np.abs(r[1:]) < 3 / math.sqrt(n))


def test_acf_alternating():
    n = 20
    x = np.array([(-1.0) ** k for k in range(n)])
    assert acf(TimeSeries(x), 1)[1] == pytest.approx(-(n - 1) / n, abs=1e-15)


def test_acf_constant_series():
    with pytest.raises(FitError, match="constant series"):
        acf(TimeSeries(np.ones(10)), 2)


def test_pacf_cuts_off_after_order():
    n = 10_000
    ts = simulate_ar(IPC_AR2, n, seed=AR2_SEED)
    p = pacf(ts, 10)
    assert p[0] == 1.0
    assert np.all(np.abs(p[3:]) < 3 / math.sqrt(n))
    assert p[2] == pytest.approx(0.203494, abs=0.05)


@pytest.mark.parametrize("phi", [(0.6,), (0.584, 0.203494), (0.5, -0.3, 0.2)])
def test_levinson_exact_autocovariances(phi):
    gamma = ar_autocovariance(phi, len(phi))
    got, sigma2, _ = levinson_durbin(gamma, len(phi))
    np.testing.assert_allclose(got, phi, atol=1e-10)
    assert sigma2 == pytest.approx(1.0, abs=1e-10)


def test_levinson_matches_toeplitz_solve(rng):
    x = rng.normal(size=500)
    gamma = autocovariance(x, 4)
    T = np.array([[gamma[abs(i - j)] for j in range(4)] for i in range(4)])
    phi, _, _ = levinson_durbin(gamma, 4)
    np.testing.assert_allclose(phi, np.linalg.solve(T, gamma[1:]), atol=1e-12)


def test_order_zero_fits():
    x = np.array([1.0, 4.0, 2.0, 5.0, 3.0])
    for fit in (fit_yule_walker(x, 0), fit_ols(x, 0)):
        assert fit.phi == ()
        assert fit.intercept == pytest.approx(3.0)
        assert fit.noise_variance == pytest.approx(np.var(x))


def test_ar1_recovery():
    ts = simulate_ar([0.6], 5000, seed=7)
    assert fit_yule_walker(ts, 1).phi[0] == pytest.approx(0.6, abs=0.05)
    assert fit_ols(ts, 1).phi[0] == pytest.approx(0.6, abs=0.05)


def test_ar2_recovery_and_agreement():
    ts = simulate_ar(IPC_AR2, 10_000, seed=AR2_SEED)
    yw, ols = fit_yule_walker(ts, 2), fit_ols(ts, 2)
    np.testing.assert_allclose(yw.phi, IPC_AR2, atol=0.05)
    np.testing.assert_allclose(ols.phi, IPC_AR2, atol=0.05)
    np.testing.assert_allclose(yw.phi, ols.phi, atol=0.02)


def test_intercept_recovered_through_mean():
    ts = simulate_ar([0.599419], 20_000, intercept=4.17636, seed=5)
    for fit in (fit_yule_walker(ts, 1), fit_ols(ts, 1)):
        assert model_mean(fit) == pytest.approx(4.17636 / (1 - 0.599419), rel=0.01)


def test_fit_errors():
    with pytest.raises(FitError):
        fit_ols(np.ones(50), 1)
    with pytest.raises(FitError):
        fit_yule_walker(np.ones(50), 1)
    with pytest.raises(FitError):
        fit_ols(np.arange(5.0), 5)


def test_short_series_warns():
    with pytest.warns(UserWarning):
        fit_ols(np.random.default_rng(0).normal(size=15), 2)


def test_select_order_white_noise():
    assert select_order(simulate_ar([], 2000, seed=WHITE_NOISE_SEED), 6, "aic") == 0


def test_select_order_ar2():
    ts = simulate_ar(IPC_AR2, 10_000, seed=AR2_SEED)
    assert select_order(ts, 6, "aic") == 2
    assert select_order(ts, 6, "bic") == 2


def test_select_order_only_candidate():
    assert select_order(simulate_ar([0.5], 100, seed=0), 0) == 0


def test_select_order_rejects_large_smax():
    with pytest.raises(ValueError):
        select_order(np.random.default_rng(0).normal(size=50), 6)


def test_model_mean():
    fit = ARFit((0.599419,), 4.17636, 1.0)
    assert model_mean(fit) == pytest.approx(10.42576, abs=1e-4)
    assert model_mean(ARFit((0.3, 0.2), 0.0, 1.0)) == 0.0
    with pytest.raises(FitError, match="unit root"):
        model_mean(ARFit((0.4, 0.6), 1.0, 1.0))


@pytest.mark.parametrize(
    "phi", [(0.599419,), (0.267728, -0.143342), (0.128940, 0.116899, 0.153156, 0.169289)]
)
def test_operator_from_fit(phi):
    assert operator_from_fit(ARFit(phi, 0.0, 1.0)).alpha == phi


def test_operator_from_fit_errors():
    with pytest.raises(FitError):
        operator_from_fit(ARFit((), 0.0, 1.0))
    with pytest.raises(FitError):
        operator_from_fit(ARFit((0.5, 0.0), 0.0, 1.0))


def test_operator_keeps_differencing_as_metadata(rng):
    walk = TimeSeries(np.cumsum(simulate_ar((0.267728, -0.143342), 3000, seed=4).values))
    fit = fit_ols(transform(walk, "diff"), 2)
    assert fit.diff_order == 1
    assert operator_from_fit(fit).n == 2


def test_residuals_of_exact_model():
    x = np.array([1.0, 1.5, 1.75, 2.0])
    r = ar_residuals(x, ARFit((0.5,), 1.0, 1.0))
    np.testing.assert_allclose(r.values, [0.0, 0.0, 0.125])


def test_arch_recovery():
    resid = simulate_arch(0.1, [0.5], 10_000, seed=ARCH_SEED)
    fit = arch_fit(resid, 1)
    assert fit.phi[0] == pytest.approx(0.5, abs=0.08)
    assert fit.intercept > 0


def test_arch_on_iid_noise():
    resid = np.random.default_rng(11).normal(size=5000)
    fit = arch_fit(resid, 3)
    for coef, se in zip(fit.phi, fit.stderr):
        assert abs(coef) < 3 * se


def test_arch_degenerate():
    with pytest.raises(FitError, match="heteroskedasticity"):
        arch_fit(np.zeros(100), 1)


def test_verdict_ipc():
    rep = stationarity_verdict(ARFit(IPC_AR2, 0.0, 1.0))
    assert rep.verdict == PAPER_CLASS
    assert rep.bounds.all_hold and not rep.bounds.advisory


def test_verdict_counterexample():
    rep = stationarity_verdict(ARFit((2.0, -3.0), 0.0, 1.0))
    assert rep.verdict == NON_STATIONARY and not rep.stationary


def test_verdict_near_unit_root():
    rep = stationarity_verdict(ARFit((0.95,), 0.0, 1.0))
    assert rep.verdict == PAPER_CLASS
    assert abs(rep.residues.values[0]) == pytest.approx(1 / 0.95)


def test_verdict_roots_outside_but_not_in_class():
    # sum |phi| = 1.1 but both roots outside the unit circle
    rep = stationarity_verdict(ARFit((1.2, -0.3), 0.0, 1.0))
    assert rep.verdict == ROOTS_OUTSIDE
    assert rep.bounds.advisory


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_verdict_end_to_end_on_class_fits(n, seed):
    phi = tuple(random_class_alpha(np.random.default_rng(seed), n))
    rep = stationarity_verdict(ARFit(phi, 0.0, 1.0))
    if rep.class_report.condition_II.simplicity.simple:
        assert rep.verdict == PAPER_CLASS
        assert rep.bounds.all_hold


def test_simulate_is_seeded():
    a = simulate_ar(IPC_AR2, 100, seed=9)
    assert a == simulate_ar(IPC_AR2, 100, seed=9)
    assert not a == simulate_ar(IPC_AR2, 100, seed=10)
