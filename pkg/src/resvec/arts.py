"""Autoregressive models and the bridge to rational operators.

An AR(s) model ``y_t = alpha + phi_1 y_{t-1} + ... + phi_s y_{t-s} + A_t``
has the autoregressive polynomial ``1 - phi_1 z - ... - phi_s z**s``; its
reciprocal is a :class:`~resvec.residua.RationalOperator` with
``alpha_j = phi_j``.  The diagnostics here fit such models, build that
operator, and run the class checks and residue bounds on it.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cpoly import RootConfig, RootSet
from .norms import DEFAULT_PS, BoundReport, verify_bounds
from .residua import (
    ClassReport,
    RationalOperator,
    ResidueVector,
    check_class,
    operator_poles,
    residues_analytic,
)

__all__ = [
    "TimeSeries",
    "ARFit",
    "DiagnosticReport",
    "FitError",
    "load_csv",
    "write_csv",
    "transform",
    "autocovariance",
    "acf",
    "pacf",
    "levinson_durbin",
    "fit_yule_walker",
    "fit_ols",
    "information_criterion",
    "select_order",
    "model_mean",
    "ar_residuals",
    "operator_from_fit",
    "arch_fit",
    "stationarity_verdict",
    "simulate_ar",
    "simulate_arch",
]

PAPER_CLASS = "stationary (paper-class)"
ROOTS_OUTSIDE = "stationary (roots outside, class conditions unmet)"
NON_STATIONARY = "non-stationary"


class FitError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Observations in time order plus the transforms already applied."""

    values: np.ndarray
    transforms: tuple[str, ...] = ()

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.size < 1:
            raise ValueError("time series needs at least one observation")
        if not np.all(np.isfinite(v)):
            raise ValueError("time series values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "transforms", tuple(self.transforms))

    def __len__(self):
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return self.transforms == other.transforms and np.array_equal(self.values, other.values)


@dataclass(frozen=True)
class ARFit:
    phi: tuple[float, ...]
    intercept: float
    noise_variance: float
    diff_order: int = 0
    method: str = "ols"
    nobs: int = 0
    stderr: tuple[float, ...] | None = None

    @property
    def order(self) -> int:
        return len(self.phi)


# -- ingestion ---------------------------------------------------------------


def _parse_number(text: str, decimal: str) -> float:
    s = text.strip()
    if decimal == ",":
        s = s.replace(".", "").replace(",", ".") if "," in s else s
    return float(s)


def _looks_numeric(text: str, decimal: str) -> bool:
    try:
        _parse_number(text, decimal)
    except ValueError:
        return False
    return True


def load_csv(path, column=0, decimal=".", delimiter=None, header=None) -> TimeSeries:
    """Read one numeric column of a delimited text file.

    Parameters
    ----------
    path : str or Path
    column : int or str
        Zero-based index, or a header name.
    decimal : {".", ","}
        Decimal separator.  With ``","`` the field delimiter defaults to
        ``";"``.
    delimiter : str, optional
    header : bool, optional
        Whether the first non-blank row is a header.  By default it is taken
        to be one when none of its cells parse as numbers, or when ``column``
        is a name.
    """
    if decimal not in (".", ","):
        raise ValueError("decimal separator must be '.' or ','")
    if delimiter is None:
        delimiter = ";" if decimal == "," else ","
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [(k, row) for k, row in enumerate(csv.reader(fh, delimiter=delimiter), 1)
                if any(cell.strip() for cell in row)]
    if not rows:
        raise FitError(f"{path}: no data rows")

    first = rows[0][1]
    if header is None:
        header = isinstance(column, str) or not any(_looks_numeric(c, decimal) for c in first)
    if isinstance(column, str):
        if not header:
            raise ValueError("column given by name but the file has no header")
        names = [c.strip() for c in first]
        if column not in names:
            raise KeyError(f"{path}: no column named {column!r}")
        index = names.index(column)
    else:
        index = int(column)
    body = rows[1:] if header else rows

    values = []
    for lineno, row in body:
        if index >= len(row) or not row[index].strip():
            raise FitError(f"{path}: row {lineno} has no value in column {column!r}")
        try:
            values.append(_parse_number(row[index], decimal))
        except ValueError:
            raise FitError(f"{path}: row {lineno}: cannot parse {row[index]!r}") from None
    if not values:
        raise FitError(f"{path}: column {column!r} is empty")
    return TimeSeries(np.array(values))


def write_csv(path, ts: TimeSeries, name: str = "value") -> None:
    """Write a one-column CSV with a header; values round-trip exactly."""
    with open(Path(path), "w", newline="", encoding="utf-8") as fh:
        fh.write(name + "\n")
        for v in ts.values:
            fh.write(repr(float(v)) + "\n")


# -- transforms and correlograms ----------------------------------------------


def transform(ts: TimeSeries, op: str, d: int = 1) -> TimeSeries:
    """Apply ``"log"`` or ``"diff"`` (``(1 - B)**d``) to a series."""
    if op == "log":
        if np.any(ts.values <= 0):
            raise ValueError("log transform needs strictly positive values")
        return TimeSeries(np.log(ts.values), ts.transforms + ("log",))
    if op == "diff":
        if d < 1:
            raise ValueError("difference order must be >= 1")
        if len(ts) <= d:
            raise ValueError(f"series of length {len(ts)} too short for diff({d})")
        return TimeSeries(np.diff(ts.values, n=d), ts.transforms + (f"diff({d})",))
    raise ValueError(f"unknown transform {op!r}")


def autocovariance(x, max_lag: int) -> np.ndarray:
    """Biased (divisor N) autocovariances of the mean-centred series at lags 0..max_lag."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if max_lag >= n:
        raise ValueError("max_lag must be smaller than the series length")
    w = x - x.mean()
    return np.array([np.dot(w[: n - k], w[k:]) / n for k in range(max_lag + 1)])


def _values(ts):
    return ts.values if isinstance(ts, TimeSeries) else np.asarray(ts, dtype=float)


def acf(ts, max_lag: int) -> np.ndarray:
    gamma = autocovariance(_values(ts), max_lag)
    if gamma[0] <= 0:
        raise FitError("constant series")
    return gamma / gamma[0]


def levinson_durbin(gamma, order: int):
    """Solve the Yule-Walker system for ``order`` from autocovariances.

    Returns
    -------
    phi : ndarray, shape (order,)
    sigma2 : float
        Innovation variance of the order-``order`` predictor.
    partial : ndarray, shape (order,)
        Partial autocorrelations at lags 1..order.
    """
    gamma = np.asarray(gamma, dtype=float)
    if gamma[0] <= 0:
        raise FitError("constant series")
    phi = np.zeros(0)
    sigma2 = gamma[0]
    partial = np.zeros(order)
    for k in range(1, order + 1):
        kappa = (gamma[k] - np.dot(phi, gamma[k - 1 : 0 : -1])) / sigma2
        phi = np.concatenate((phi - kappa * phi[::-1], [kappa]))
        sigma2 *= 1.0 - kappa * kappa
        partial[k - 1] = kappa
        if sigma2 <= 0:
            raise FitError("autocovariance sequence is singular")
    return phi, float(sigma2), partial


def pacf(ts, max_lag: int) -> np.ndarray:
    """Partial autocorrelations at lags 0..max_lag (lag 0 is 1)."""
    r = acf(ts, max_lag)
    _, _, partial = levinson_durbin(r, max_lag)
    return np.concatenate(([1.0], partial))


# -- estimation ---------------------------------------------------------------


def _check_order(x, s):
    if s < 0:
        raise ValueError("order must be >= 0")
    if s >= x.size:
        raise FitError(f"order {s} needs more than {x.size} observations")
    if s > 0 and x.size <= 10 * s:
        warnings.warn(f"only {x.size} observations for order {s}", stacklevel=3)


def _lag_matrix(x, s):
    n = x.size
    return np.column_stack([x[s - j : n - j] for j in range(1, s + 1)]) if s else np.empty((n, 0))


def fit_yule_walker(ts, s: int) -> ARFit:
    """Yule-Walker estimate from biased autocovariances via Durbin-Levinson.

    The intercept is ``mu (1 - sum phi)`` with ``mu`` the sample mean; the
    noise variance is the mean square of the one-step residuals.
    """
    x = _values(ts)
    _check_order(x, s)
    gamma = autocovariance(x, s)
    if gamma[0] <= 0:
        raise FitError("constant series")
    phi, _, _ = levinson_durbin(gamma, s)
    mu = float(x.mean())
    w = x - mu
    resid = w[s:] - _lag_matrix(w, s) @ phi
    return ARFit(
        phi=tuple(float(v) for v in phi),
        intercept=mu * (1.0 - float(np.sum(phi))),
        noise_variance=float(np.mean(resid**2)),
        diff_order=_diff_order(ts),
        method="yule_walker",
        nobs=x.size,
    )


def fit_ols(ts, s: int, with_intercept: bool = True) -> ARFit:
    """Least-squares regression of ``y_t`` on its ``s`` lags."""
    x = _values(ts)
    _check_order(x, s)
    if np.ptp(x) == 0:
        raise FitError("constant series")
    y = x[s:]
    X = _lag_matrix(x, s)
    if with_intercept:
        X = np.column_stack((np.ones(y.size), X))
    if X.shape[1] == 0:
        return ARFit((), 0.0, float(np.mean(y**2)), _diff_order(ts), "ols", x.size, ())
    beta, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < X.shape[1]:
        raise FitError("singular design matrix")
    resid = y - X @ beta
    rss = float(resid @ resid)
    dof = y.size - X.shape[1]
    stderr = ()
    if dof > 0:
        cov = rss / dof * np.linalg.inv(X.T @ X)
        stderr = tuple(float(v) for v in np.sqrt(np.diag(cov)))
    if with_intercept:
        intercept, phi = float(beta[0]), beta[1:]
        stderr = stderr[1:] if stderr else stderr
    else:
        intercept, phi = 0.0, beta
    return ARFit(
        phi=tuple(float(v) for v in phi),
        intercept=intercept,
        noise_variance=rss / y.size,
        diff_order=_diff_order(ts),
        method="ols",
        nobs=x.size,
        stderr=stderr,
    )


def _diff_order(ts) -> int:
    if not isinstance(ts, TimeSeries):
        return 0
    total = 0
    for t in ts.transforms:
        if t.startswith("diff("):
            total += int(t[5:-1])
    return total


def information_criterion(noise_variance: float, nobs: int, s: int, criterion: str) -> float:
    base = nobs * math.log(noise_variance)
    if criterion == "aic":
        return base + 2 * s
    if criterion == "bic":
        return base + s * math.log(nobs)
    if criterion == "hqic":
        return base + 2 * s * math.log(math.log(nobs))
    raise ValueError(f"unknown criterion {criterion!r}")


def select_order(ts, s_max: int, criterion: str = "aic") -> int:
    """Order in ``0..s_max`` minimising the criterion over Yule-Walker fits.

    Ties go to the smaller order.
    """
    x = _values(ts)
    if s_max < 0:
        raise ValueError("s_max must be >= 0")
    if s_max >= x.size / 10:
        raise ValueError("s_max must be below a tenth of the series length")
    best, best_value = 0, math.inf
    for s in range(s_max + 1):
        fit = fit_yule_walker(x, s)
        value = information_criterion(fit.noise_variance, x.size, s, criterion)
        if value < best_value:
            best, best_value = s, value
    return best


def model_mean(fit: ARFit) -> float:
    denom = 1.0 - math.fsum(fit.phi)
    if abs(denom) <= 1e-12:
        raise FitError("unit root: mean undefined")
    return fit.intercept / denom


def ar_residuals(ts, fit: ARFit) -> TimeSeries:
    """One-step residuals ``y_t - alpha - sum phi_j y_{t-j}`` for ``t >= s``."""
    x = _values(ts)
    s = fit.order
    resid = x[s:] - fit.intercept - _lag_matrix(x, s) @ np.asarray(fit.phi, dtype=float).reshape(-1)
    return TimeSeries(resid)


def operator_from_fit(fit: ARFit) -> RationalOperator:
    if fit.order < 1:
        raise FitError("AR order 0 has no operator")
    if fit.phi[-1] == 0.0:
        raise FitError("last AR coefficient is 0; refit at a lower order")
    return RationalOperator(fit.phi)


def arch_fit(residuals, s: int) -> ARFit:
    """ARCH(s): AR(s) with intercept fitted by OLS to the squared residuals."""
    if s < 1:
        raise ValueError("ARCH order must be >= 1")
    sq = _values(residuals) ** 2
    if np.ptp(sq) == 0:
        raise FitError("no conditional heteroskedasticity signal")
    fit = fit_ols(sq, s, with_intercept=True)
    return ARFit(
        phi=fit.phi,
        intercept=fit.intercept,
        noise_variance=fit.noise_variance,
        diff_order=0,
        method="ols",
        nobs=fit.nobs,
        stderr=fit.stderr,
    )


# -- diagnostics --------------------------------------------------------------


@dataclass(frozen=True)
class DiagnosticReport:
    fit: ARFit
    operator: RationalOperator
    poles: RootSet
    class_report: ClassReport
    residues: ResidueVector | None
    bounds: BoundReport | None
    verdict: str

    @property
    def stationary(self) -> bool:
        return self.verdict != NON_STATIONARY

    @property
    def in_class(self) -> bool:
        return self.verdict == PAPER_CLASS


def stationarity_verdict(
    fit: ARFit, ps=DEFAULT_PS, root_config: RootConfig | None = None
) -> DiagnosticReport:
    op = operator_from_fit(fit)
    poles = operator_poles(op, root_config)
    cls = check_class(op, poles)
    residues = bounds = None
    if cls.condition_II.simplicity.simple:
        residues = residues_analytic(op, poles)
        bounds = verify_bounds(residues, cls, ps)
    if cls.in_class:
        verdict = PAPER_CLASS
    elif cls.condition_II.outside_unit_circle:
        verdict = ROOTS_OUTSIDE
    else:
        verdict = NON_STATIONARY
    return DiagnosticReport(fit, op, poles, cls, residues, bounds, verdict)


# -- simulation ---------------------------------------------------------------


def simulate_ar(phi, n: int, intercept: float = 0.0, seed: int = 0, burn_in: int = 100) -> TimeSeries:
    """Simulate ``y_t = intercept + sum phi_j y_{t-j} + e_t`` with standard normal ``e_t``.

    The recursion starts from zeros and the first ``burn_in`` values are
    discarded.
    """
    phi = np.asarray(phi, dtype=float).ravel()
    s = phi.size
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal(n + burn_in)
    y = np.zeros(n + burn_in + s)
    rev = phi[::-1]
    for t in range(n + burn_in):
        y[t + s] = intercept + np.dot(rev, y[t : t + s]) + eps[t]
    return TimeSeries(y[s + burn_in :])


def simulate_arch(alpha0: float, alphas, n: int, seed: int = 0, burn_in: int = 100) -> TimeSeries:
    """Simulate ``A_t = sqrt(h_t) e_t`` with ``h_t = alpha0 + sum alpha_j A_{t-j}**2``."""
    alphas = np.asarray(alphas, dtype=float).ravel()
    s = alphas.size
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal(n + burn_in)
    a = np.zeros(n + burn_in + s)
    rev = alphas[::-1]
    for t in range(n + burn_in):
        h = alpha0 + np.dot(rev, a[t : t + s] ** 2)
        a[t + s] = math.sqrt(h) * eps[t]
    return TimeSeries(a[s + burn_in :])
