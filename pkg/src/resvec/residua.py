"""The rational operators ``f(z) = 1 / (1 - a_1 z - ... - a_n z**n)``.

Residues at the poles are computed three ways: analytically as
``1 / P'(z_j)``, from the closed forms available for ``n <= 2``, and by
trapezoidal quadrature of ``f`` on a small circle around each pole.  The
quadrature route never touches ``P'`` and serves as an independent check.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .cpoly import (
    DERIVATIVE_ATOL,
    Polynomial,
    RootConfig,
    RootSet,
    SimplicityVerdict,
    find_roots,
    poly_derivative,
    poly_eval,
    separation_report,
)

__all__ = [
    "RationalOperator",
    "ConditionI",
    "ConditionII",
    "ClassReport",
    "ResidueVector",
    "QuadratureConfig",
    "OperatorError",
    "NonSimplePoleError",
    "QuadratureError",
    "operator_new",
    "order_poles",
    "operator_poles",
    "check_class",
    "residues_analytic",
    "residues_factored",
    "residues_closed_form",
    "residues_quadrature",
    "align_residues",
]

# |z| <= 1 + UNIT_CIRCLE_MARGIN counts as on or inside the unit circle.
UNIT_CIRCLE_MARGIN = 1e-9


class OperatorError(ValueError):
    pass


class NonSimplePoleError(ValueError):
    pass


class QuadratureError(ValueError):
    pass


@dataclass(frozen=True)
class RationalOperator:
    """``f(z) = 1 / (1 - sum_j alpha[j-1] z**j)`` with real ``alpha``.

    The constructor enforces ``alpha_n != 0``.  Whether the coefficients
    satisfy the absolute-sum condition is left to :func:`check_class`.
    """

    alpha: tuple[float, ...]

    def __post_init__(self):
        alpha = tuple(float(a) for a in np.atleast_1d(np.asarray(self.alpha, dtype=float)))
        if len(alpha) == 0:
            raise OperatorError("operator needs at least one coefficient")
        if not all(np.isfinite(alpha)):
            raise OperatorError("coefficients must be finite")
        if alpha[-1] == 0.0:
            raise OperatorError("αₙ = 0: degree ill-defined")
        object.__setattr__(self, "alpha", alpha)

    @property
    def n(self) -> int:
        return len(self.alpha)

    @cached_property
    def denominator(self) -> Polynomial:
        return Polynomial(np.concatenate(([1.0], -np.asarray(self.alpha))))

    def __call__(self, z):
        return 1.0 / poly_eval(self.denominator, z)


def operator_new(alpha: Sequence[float]) -> RationalOperator:
    return RationalOperator(tuple(alpha))


def order_poles(roots) -> np.ndarray:
    """Permutation sorting poles by descending modulus, then ascending argument."""
    roots = np.asarray(roots)
    # Round the modulus so conjugate pairs tie exactly and fall back on the
    # argument.
    mod = np.round(np.abs(roots), 12)
    return np.lexsort((np.angle(roots), -mod))


def operator_poles(op: RationalOperator, cfg: RootConfig | None = None) -> RootSet:
    """Poles of ``op`` in the canonical order of :func:`order_poles`."""
    rs = find_roots(op.denominator, cfg)
    return rs.reordered(order_poles(rs.roots))


@dataclass(frozen=True)
class ConditionI:
    passed: bool
    coefficient_sum: float
    margin: float


@dataclass(frozen=True)
class ConditionII:
    passed: bool
    outside_unit_circle: bool
    min_pole_modulus: float
    simplicity: SimplicityVerdict


@dataclass(frozen=True)
class ClassReport:
    condition_I: ConditionI
    condition_II: ConditionII

    @property
    def in_class(self) -> bool:
        return self.condition_I.passed and self.condition_II.passed


def check_class(op: RationalOperator, poles: RootSet | None = None) -> ClassReport:
    """Test both membership conditions and report their numeric margins.

    The modulus part of the second condition is checked on its own even
    though the absolute-sum condition already implies it.
    """
    if poles is None:
        poles = operator_poles(op)
    total = float(np.sum(np.abs(op.alpha)))
    cond1 = ConditionI(passed=total < 1.0, coefficient_sum=total, margin=1.0 - total)

    verdict = separation_report(poles, op.denominator)
    min_mod = float(np.min(np.abs(poles.roots)))
    outside = min_mod > 1.0 + UNIT_CIRCLE_MARGIN
    cond2 = ConditionII(
        passed=bool(outside and verdict.simple),
        outside_unit_circle=bool(outside),
        min_pole_modulus=min_mod,
        simplicity=verdict,
    )
    return ClassReport(cond1, cond2)


@dataclass(frozen=True, eq=False)
class ResidueVector:
    """Residues ``values[j]`` of ``f`` at ``poles[j]``."""

    values: np.ndarray
    poles: np.ndarray
    method: str

    def __len__(self):
        return self.values.size

    def __iter__(self):
        return iter(self.values)


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def residues_analytic(op: RationalOperator, poles: RootSet) -> ResidueVector:
    """Residues ``1 / P'(z_j)`` at simple poles."""
    z = np.asarray(poles.roots)
    dp = poly_eval(poly_derivative(op.denominator), z)
    if np.any(np.abs(dp) <= DERIVATIVE_ATOL):
        raise NonSimplePoleError("pole not numerically simple; residue formula invalid")
    return ResidueVector(_frozen(1.0 / dp), _frozen(z), "analytic")


def residues_factored(op: RationalOperator, poles: RootSet) -> ResidueVector:
    """Residues from the factored denominator ``-alpha_n prod_k (z - z_k)``.

    Numerically weaker than :func:`residues_analytic` when poles cluster; kept
    for cross-checking.
    """
    z = np.asarray(poles.roots)
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    prod = -op.alpha[-1] * np.prod(diff, axis=1)
    if np.any(prod == 0):
        raise NonSimplePoleError("pole not numerically simple; residue formula invalid")
    return ResidueVector(_frozen(1.0 / prod), _frozen(z), "factored")


def residues_closed_form(op: RationalOperator) -> ResidueVector:
    """Closed-form residues for ``n = 1`` and ``n = 2``.

    For ``n = 2`` the poles are ``(a1 +/- sqrt(a1**2 + 4 a2)) / (-2 a2)`` with
    the ``+`` branch first, and the matching residues are
    ``+/- 1 / sqrt(a1**2 + 4 a2)``.
    """
    if op.n == 1:
        (a1,) = op.alpha
        return ResidueVector(_frozen([-1.0 / a1]), _frozen([1.0 / a1]), "closed_form")
    if op.n == 2:
        a1, a2 = op.alpha
        disc = a1 * a1 + 4.0 * a2
        if disc == 0.0:
            raise NonSimplePoleError("double pole")
        root = np.sqrt(complex(disc))
        poles = [(a1 + root) / (-2.0 * a2), (a1 - root) / (-2.0 * a2)]
        return ResidueVector(_frozen([1.0 / root, -1.0 / root]), _frozen(poles), "closed_form")
    raise NotImplementedError("no closed form implemented")


@dataclass(frozen=True)
class QuadratureConfig:
    points_per_circle: int = 256
    radius_factor: float = 0.25


def residues_quadrature(
    op: RationalOperator, poles: RootSet, cfg: QuadratureConfig | None = None
) -> ResidueVector:
    """Residues as ``(1 / 2 pi i)`` times the integral of ``f`` round each pole.

    Each circle is centred on a pole with radius ``radius_factor`` times the
    distance to the nearest other pole (``radius_factor * |z_1|`` when there
    is only one pole) and integrated with the m-point trapezoidal rule.  With
    ``z = z_j + r e^{i theta}`` the integral reduces to the mean of
    ``f(z) r e^{i theta}`` over the nodes.
    """
    cfg = cfg or QuadratureConfig()
    m = cfg.points_per_circle
    if m < 8:
        raise QuadratureError("insufficient quadrature resolution")
    if not cfg.radius_factor > 0:
        raise QuadratureError("radius factor must be positive")
    z = np.asarray(poles.roots)
    if z.size == 1:
        radii = np.array([cfg.radius_factor * abs(z[0])])
        nearest = np.array([np.inf])
    else:
        diff = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(diff, np.inf)
        nearest = diff.min(axis=1)
        radii = cfg.radius_factor * nearest
    if np.any(radii >= nearest):
        raise QuadratureError("quadrature circle would enclose a neighbouring pole")

    rot = np.exp(2j * np.pi * np.arange(m) / m)
    den = op.denominator
    values = np.empty(z.size, dtype=complex)
    for j in range(z.size):
        nodes = z[j] + radii[j] * rot
        values[j] = np.sum(radii[j] * rot / poly_eval(den, nodes)) / m
    return ResidueVector(_frozen(values), _frozen(z), "quadrature")


def align_residues(reference: ResidueVector, other: ResidueVector) -> ResidueVector:
    """Reorder ``other`` so its poles line up with ``reference.poles``.

    Matching is by nearest pole; raises if the pairing is not one-to-one.
    """
    ref = np.asarray(reference.poles)
    oth = np.asarray(other.poles)
    if ref.size != oth.size:
        raise ValueError("residue vectors have different lengths")
    order = np.argmin(np.abs(ref[:, None] - oth[None, :]), axis=1)
    if np.unique(order).size != order.size:
        raise ValueError("pole sets cannot be matched one-to-one")
    return ResidueVector(_frozen(other.values[order]), _frozen(oth[order]), other.method)
