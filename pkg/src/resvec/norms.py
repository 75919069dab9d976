"""Norms of residue vectors and the lower bound they are expected to obey.

For an operator of degree ``n`` in the class, the residue vector ``c``
satisfies ``||c||_p > (1/n)**((p-1)/p)`` and ``||c||_inf > 1/n``.  This module
evaluates those inequalities on concrete residue vectors and scans random
in-class operators looking for counterexamples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .cpoly import RootConfig, find_roots_batch, make_rootset
from .residua import (
    ClassReport,
    RationalOperator,
    ResidueVector,
    check_class,
    order_poles,
    residues_analytic,
)

__all__ = [
    "INF",
    "parse_p",
    "p_norm",
    "inf_norm",
    "theorem_lower_bound",
    "BoundEntry",
    "BoundReport",
    "verify_bounds",
    "SandwichReport",
    "sandwich_check",
    "ScanReport",
    "conjecture_scan",
]

INF = math.inf
DEFAULT_PS = (1, 2, INF)


def parse_p(p) -> int | float:
    """Normalise a norm order: a positive integer or infinity."""
    if isinstance(p, str):
        s = p.strip().lower()
        if s in ("inf", "infinity", "∞"):
            return INF
        try:
            p = int(s)
        except ValueError:
            raise ValueError(f"invalid norm order {p!r}") from None
    if p == INF:
        return INF
    if isinstance(p, bool) or int(p) != p:
        raise ValueError(f"norm order must be an integer >= 1 or inf, got {p!r}")
    p = int(p)
    if p < 1:
        raise ValueError(f"norm order must be >= 1, got {p}")
    return p


def _magnitudes(v) -> np.ndarray:
    a = np.abs(np.atleast_1d(np.asarray(v, dtype=complex)))
    if a.size == 0:
        raise ValueError("norm of an empty vector")
    return a


def p_norm(v, p) -> float:
    """``(sum |v_j|**p) ** (1/p)``, scaled by ``max |v_j|`` to avoid overflow."""
    p = parse_p(p)
    a = _magnitudes(v)
    if p == INF:
        return float(a.max())
    top = a.max()
    if top == 0.0:
        return 0.0
    if p == 1:
        return float(a.sum())
    return float(top * np.sum((a / top) ** p) ** (1.0 / p))


def inf_norm(v) -> float:
    return float(_magnitudes(v).max())


def theorem_lower_bound(n: int, p) -> float:
    if n < 1:
        raise ValueError("degree must be >= 1")
    p = parse_p(p)
    if p == INF:
        return 1.0 / n
    return (1.0 / n) ** ((p - 1) / p)


@dataclass(frozen=True)
class BoundEntry:
    p: int | float
    norm_value: float
    lower_bound: float

    @property
    def margin(self) -> float:
        return self.norm_value - self.lower_bound

    @property
    def holds(self) -> bool:
        return self.margin > 0


@dataclass(frozen=True)
class BoundReport:
    """Norm-versus-bound comparison for one residue vector.

    When ``in_class_context`` is false the theorem's hypothesis is unmet and
    the entries are advisory only.
    """

    n: int
    entries: tuple[BoundEntry, ...]
    in_class_context: bool

    @property
    def advisory(self) -> bool:
        return not self.in_class_context

    @property
    def all_hold(self) -> bool:
        return all(e.holds for e in self.entries)

    def entry(self, p) -> BoundEntry:
        p = parse_p(p)
        for e in self.entries:
            if e.p == p:
                return e
        raise KeyError(p)


def _sorted_ps(ps) -> tuple:
    return tuple(sorted({parse_p(p) for p in ps}))


def verify_bounds(
    rv: ResidueVector | Sequence[complex],
    class_report: ClassReport | None = None,
    ps: Iterable = DEFAULT_PS,
) -> BoundReport:
    values = rv.values if isinstance(rv, ResidueVector) else np.asarray(rv, dtype=complex)
    n = len(values)
    if n == 0:
        raise ValueError("empty residue vector")
    ps = _sorted_ps(ps)
    if not ps:
        raise ValueError("no norm orders requested")
    mags = _magnitudes(values)
    entries = tuple(BoundEntry(p, p_norm(mags, p), theorem_lower_bound(n, p)) for p in ps)
    in_class = bool(class_report.in_class) if class_report is not None else False
    return BoundReport(n=n, entries=entries, in_class_context=in_class)


@dataclass(frozen=True)
class SandwichReport:
    inf_norm: float
    two_norm: float
    upper: float

    @property
    def holds(self) -> bool:
        # Both ends can be equalities, so allow a few ulps of rounding.
        slack = 4 * np.finfo(float).eps * self.upper
        return self.inf_norm <= self.two_norm + slack and self.two_norm <= self.upper + slack


def sandwich_check(v) -> SandwichReport:
    """``||v||_inf <= ||v||_2 <= sqrt(n) ||v||_inf`` for a single vector."""
    a = _magnitudes(v)
    lo = inf_norm(a)
    return SandwichReport(lo, p_norm(a, 2), math.sqrt(a.size) * lo)


@dataclass
class ScanReport:
    """Result of :func:`conjecture_scan`.

    ``min_margin[(n, p)]`` is the smallest ``norm - bound`` seen over the
    accepted draws of degree ``n``.  ``violations`` holds one dict per failed
    inequality and is expected to stay empty.
    """

    seed: int
    n_max: int
    trials_per_n: int
    ps: tuple
    trials: int = 0
    accepted: int = 0
    rejected: int = 0
    rejected_zero_leading: int = 0
    rejected_not_simple: int = 0
    rejected_no_convergence: int = 0
    modulus_failures: list = field(default_factory=list)
    min_margin: dict = field(default_factory=dict)
    min_pole_modulus: dict = field(default_factory=dict)
    max_residue_sum: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _draw(seed: int, n: int, trial: int) -> np.ndarray:
    rng = np.random.default_rng([seed, n, trial])
    radius = rng.random()
    weights = rng.dirichlet(np.ones(n)) if n > 1 else np.ones(1)
    signs = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    return radius * weights * signs


def conjecture_scan(
    n_max: int,
    trials_per_n: int,
    ps: Iterable = DEFAULT_PS,
    seed: int = 0,
    root_config: RootConfig | None = None,
) -> ScanReport:
    """Draw random operators satisfying the absolute-sum condition and test the bound.

    Coefficients are ``u * w * s`` with ``u`` uniform on [0, 1), ``w`` a
    uniform point of the simplex and ``s`` independent random signs, so
    ``sum |alpha_j| = u < 1``.  Draw ``t`` for degree ``n`` uses the stream
    ``default_rng([seed, n, t])``, which makes the scan reproducible and
    independent of evaluation order.  Draws with ``alpha_n = 0``, failed root
    convergence, or non-simple poles are rejected and counted.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if trials_per_n < 1:
        raise ValueError("trials_per_n must be >= 1")
    ps = _sorted_ps(ps)
    if not ps:
        raise ValueError("no norm orders requested")
    cfg = root_config or RootConfig()
    report = ScanReport(seed=seed, n_max=n_max, trials_per_n=trials_per_n, ps=ps)

    for n in range(1, n_max + 1):
        draws = np.array([_draw(seed, n, t) for t in range(trials_per_n)])
        report.trials += trials_per_n
        usable = draws[:, -1] != 0.0
        report.rejected_zero_leading += int(np.count_nonzero(~usable))
        alphas = draws[usable]
        coeffs = np.hstack((np.ones((alphas.shape[0], 1)), -alphas))
        if n == 1:
            roots = 1.0 / alphas.astype(complex)
            converged = np.ones(alphas.shape[0], dtype=bool)
            iterations = np.zeros(alphas.shape[0], dtype=int)
        else:
            roots, _, converged, iterations = find_roots_batch(coeffs, cfg)

        margins = {p: math.inf for p in ps}
        min_mod = math.inf
        max_sum = 0.0
        for k, alpha in enumerate(alphas):
            if not converged[k]:
                report.rejected_no_convergence += 1
                continue
            op = RationalOperator(tuple(alpha))
            rs = make_rootset(op.denominator, roots[k].copy(), iterations[k], cfg)
            rs = rs.reordered(order_poles(rs.roots))
            cls = check_class(op, rs)
            if not cls.condition_II.simplicity.simple:
                report.rejected_not_simple += 1
                continue
            report.accepted += 1
            min_mod = min(min_mod, cls.condition_II.min_pole_modulus)
            if not cls.condition_II.outside_unit_circle:
                report.modulus_failures.append(alpha.tolist())
            rv = residues_analytic(op, rs)
            if n >= 2:
                max_sum = max(max_sum, abs(complex(np.sum(rv.values))))
            bounds = verify_bounds(rv, cls, ps)
            for e in bounds.entries:
                margins[e.p] = min(margins[e.p], e.margin)
                if not e.holds:
                    report.violations.append(
                        {
                            "alpha": alpha.tolist(),
                            "p": e.p,
                            "norm": e.norm_value,
                            "bound": e.lower_bound,
                        }
                    )
        for p in ps:
            report.min_margin[(n, p)] = margins[p]
        report.min_pole_modulus[n] = min_mod
        if n >= 2:
            report.max_residue_sum[n] = max_sum

    report.rejected = (
        report.rejected_zero_leading + report.rejected_not_simple + report.rejected_no_convergence
    )
    return report
