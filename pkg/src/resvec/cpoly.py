"""Complex polynomials in ascending-power form and their roots.

Roots are computed with Aberth-Ehrlich simultaneous iteration started from
equally spaced points on the Cauchy bound circle, then polished with Newton
steps.  The iteration core works on a batch of polynomials of equal degree,
which is what lets the Monte Carlo scanner in :mod:`resvec.norms` stay fast.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "Polynomial",
    "RootConfig",
    "RootSet",
    "RootFindingError",
    "SimplicityVerdict",
    "poly_eval",
    "poly_derivative",
    "cauchy_root_bound",
    "find_roots",
    "find_roots_batch",
    "separation_report",
]

# Angular offset of the starting points.  Any value that is not a rational
# multiple of pi keeps the initial configuration off the real axis, so real
# polynomials do not start out symmetric about it.
_START_ANGLE = 0.4
_NEWTON_POLISH_STEPS = 3

SEPARATION_RTOL = 1e-8
DERIVATIVE_ATOL = 1e-10
# Relative backward error below which two computed roots are treated as one
# double root.  In double precision a true double root splits into two
# computed roots about sqrt(eps) apart, far above SEPARATION_RTOL.
COINCIDENCE_BACKWARD_ERROR = 1e-12


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Polynomial ``c[0] + c[1] z + ... + c[d] z**d``.

    Trailing zero coefficients are trimmed at construction, so the leading
    coefficient is nonzero unless the polynomial is identically zero.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        if c[-1] == 0:
            nz = np.flatnonzero(c)
            c = c[: nz[-1] + 1] if nz.size else c[:1]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.coeffs.imag == 0))

    def __call__(self, z):
        return poly_eval(self, z)

    @cached_property
    def derivative(self) -> "Polynomial":
        if self.degree < 1:
            raise ValueError("derivative of constant has no roots to analyze")
        return Polynomial(self.coeffs[1:] * np.arange(1, self.degree + 1))

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        return f"Polynomial({self.coeffs.tolist()!r})"


def poly_eval(p: Polynomial, z):
    """Evaluate ``p`` at ``z`` (scalar or array) by Horner's scheme."""
    c = p.coeffs
    z = np.asarray(z, dtype=complex)
    acc = np.full(z.shape, c[-1], dtype=complex)
    for ck in c[-2::-1]:
        acc = acc * z + ck
    return acc[()] if acc.ndim == 0 else acc


def poly_derivative(p: Polynomial) -> Polynomial:
    return p.derivative


def cauchy_root_bound(p: Polynomial) -> float:
    """Return ``1 + max_k |c_k / c_d|``; every root has modulus at most this."""
    if p.degree < 1:
        raise ValueError("root bound needs degree >= 1")
    c = p.coeffs
    return float(1.0 + np.max(np.abs(c[:-1] / c[-1])))


@dataclass(frozen=True)
class RootConfig:
    max_iterations: int = 200
    tolerance: float = 1e-12

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True, eq=False)
class RootSet:
    """Roots of a polynomial together with their quality measures.

    ``residual_magnitudes[j]`` is ``|P(roots[j])|``; ``residual_limits[j]`` is
    the convergence threshold that residual was held to.
    """

    roots: np.ndarray
    residual_magnitudes: np.ndarray
    residual_limits: np.ndarray
    min_separation: float
    iterations_used: int
    tolerance: float

    def __len__(self):
        return self.roots.size

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.roots)

    def reordered(self, order) -> "RootSet":
        order = np.asarray(order)
        return RootSet(
            roots=self.roots[order],
            residual_magnitudes=self.residual_magnitudes[order],
            residual_limits=self.residual_limits[order],
            min_separation=self.min_separation,
            iterations_used=self.iterations_used,
            tolerance=self.tolerance,
        )


class RootFindingError(RuntimeError):
    """Raised when the iteration does not converge.

    The best iterates and their residuals are kept on the exception so a
    caller can still inspect them.
    """

    def __init__(self, message, roots=None, residuals=None):
        super().__init__(message)
        self.roots = roots
        self.residuals = residuals


@dataclass(frozen=True)
class SimplicityVerdict:
    """Outcome of :func:`separation_report`.

    ``closest_pair`` holds the indices of the two nearest roots (``None`` for
    degree 1) and ``weakest_root`` the index with the smallest ``|P'|``.
    """

    simple: bool
    min_separation: float
    separation_threshold: float
    closest_pair: tuple[int, int] | None
    min_derivative: float
    weakest_root: int
    coincident_pairs: tuple[tuple[int, int], ...] = field(default=())

    @property
    def reason(self) -> str:
        if self.simple:
            return "all roots numerically simple"
        parts = []
        if self.closest_pair is not None and self.min_separation <= self.separation_threshold:
            i, j = self.closest_pair
            parts.append(f"roots {i} and {j} are {self.min_separation:.3g} apart")
        if self.coincident_pairs:
            parts.append(
                "numerically coincident pairs "
                + ", ".join(f"({i}, {j})" for i, j in self.coincident_pairs)
            )
        if self.min_derivative <= DERIVATIVE_ATOL:
            parts.append(f"|P'| = {self.min_derivative:.3g} at root {self.weakest_root}")
        return "; ".join(parts)


def _start_radius(c):
    # Smaller of the Cauchy and Fujiwara bounds.  Both enclose every root;
    # Fujiwara tracks the root radius when the leading coefficient is tiny,
    # where the Cauchy circle is so large that (1 + |z|)**d overflows.
    d = c.shape[1] - 1
    ratios = np.abs(c[:, :-1] / c[:, -1:])
    cauchy = 1.0 + np.max(ratios, axis=1)
    ratios = ratios.copy()
    ratios[:, 0] /= 2.0
    k = np.arange(d, 0, -1)  # c_0 pairs with k = d, c_{d-1} with k = 1
    fujiwara = 2.0 * np.max(ratios ** (1.0 / k), axis=1)
    return np.minimum(cauchy, fujiwara)


def _horner_rows(c, z):
    # c: (T, d+1) ascending, z: (T, k)
    acc = np.repeat(c[:, -1:], z.shape[1], axis=1)
    for k in range(c.shape[1] - 2, -1, -1):
        acc = acc * z + c[:, k : k + 1]
    return acc


def _residual_limits(c, z, tol):
    # Backward-error test: tol * sum_k |c_k| |z|**k.  This never exceeds
    # tol * max|c| * (1 + |z|)**d, and unlike that bound it stays meaningful
    # at high degree, where (1 + |z|)**d would accept almost any point.
    return tol * _horner_rows(np.abs(c), np.abs(z).astype(complex)).real


def _symmetrize_conjugates(z):
    """Make a root set of a real polynomial exactly conjugation-closed."""
    vals = [complex(v) for v in z]
    todo = sorted(range(len(vals)), key=lambda k: -abs(vals[k].imag))
    while todo:
        i = todo.pop(0)
        zi = vals[i]
        best, best_dist = None, 2.0 * abs(zi.imag)
        target = zi.conjugate()
        for j in todo:
            dist = abs(vals[j] - target)
            if dist < best_dist:
                best, best_dist = j, dist
        if best is None:
            vals[i] = complex(zi.real, 0.0)
        else:
            todo.remove(best)
            mid = 0.5 * (zi + vals[best].conjugate())
            vals[i], vals[best] = mid, mid.conjugate()
    return np.array(vals, dtype=complex)


def _min_separation(z):
    if z.size < 2:
        return float("inf")
    diff = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(diff, np.inf)
    return float(diff.min())


def find_roots_batch(coeffs, cfg: RootConfig | None = None):
    """Aberth-Ehrlich iteration on many polynomials of one degree at once.

    Parameters
    ----------
    coeffs : array_like, shape (T, d+1)
        Ascending coefficients, one polynomial per row, with nonzero leading
        coefficients and ``d >= 1``.
    cfg : RootConfig, optional

    Returns
    -------
    roots : ndarray, shape (T, d)
    residuals : ndarray, shape (T, d)
        ``|P(z)|`` at the returned roots (before conjugate symmetrization).
    converged : ndarray of bool, shape (T,)
    iterations : ndarray of int, shape (T,)
    """
    cfg = cfg or RootConfig()
    c = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    T, d1 = c.shape
    d = d1 - 1
    if d < 1:
        raise ValueError("root finding needs degree >= 1")
    lead = c[:, -1:]
    if np.any(lead == 0):
        raise ValueError("leading coefficients must be nonzero")
    dc = c[:, 1:] * np.arange(1, d + 1)

    radius = _start_radius(c)
    angles = 2.0 * np.pi * np.arange(d) / d + _START_ANGLE
    z = radius[:, None] * np.exp(1j * angles)[None, :]

    active = np.ones(T, dtype=bool)
    iterations = np.zeros(T, dtype=int)
    eye = np.eye(d, dtype=bool)
    for it in range(1, cfg.max_iterations + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        za, ca = z[idx], c[idx]
        p = _horner_rows(ca, za)
        done = np.all(np.abs(p) <= _residual_limits(ca, za, cfg.tolerance), axis=1)
        iterations[idx[done]] = it - 1
        active[idx[done]] = False
        keep = ~done
        if not keep.any():
            break
        idx, za, ca, p = idx[keep], za[keep], ca[keep], p[keep]
        dp = _horner_rows(dc[idx], za)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = np.where(p == 0, 0.0, p / dp)
            diff = za[:, :, None] - za[:, None, :]
            diff[:, eye] = np.inf
            repulsion = np.sum(1.0 / diff, axis=2)
            step = newton / (1.0 - newton * repulsion)
        step = np.where(np.isfinite(step), step, 0.0)
        z[idx] = za - step
    else:
        idx = np.flatnonzero(active)
        if idx.size:
            p = _horner_rows(c[idx], z[idx])
            done = np.all(np.abs(p) <= _residual_limits(c[idx], z[idx], cfg.tolerance), axis=1)
            active[idx[done]] = False
    iterations[active] = cfg.max_iterations

    # Newton polishing, accepting a step only where it lowers the residual.
    res = np.abs(_horner_rows(c, z))
    for _ in range(_NEWTON_POLISH_STEPS):
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = z - _horner_rows(c, z) / _horner_rows(dc, z)
        cand = np.where(np.isfinite(cand), cand, z)
        cand_res = np.abs(_horner_rows(c, cand))
        better = cand_res < res
        z = np.where(better, cand, z)
        res = np.where(better, cand_res, res)

    return z, res, ~active, iterations


def make_rootset(p: Polynomial, z, iterations, cfg: RootConfig) -> RootSet:
    if p.is_real:
        z = _symmetrize_conjugates(z)
    res = np.abs(poly_eval(p, z))
    limits = _residual_limits(p.coeffs[None, :], z[None, :], cfg.tolerance)[0]
    for a in (z, res, limits):
        a.setflags(write=False)
    return RootSet(
        roots=z,
        residual_magnitudes=res,
        residual_limits=limits,
        min_separation=_min_separation(z),
        iterations_used=int(iterations),
        tolerance=cfg.tolerance,
    )


def find_roots(p: Polynomial, cfg: RootConfig | None = None) -> RootSet:
    """Compute all ``p.degree`` roots of ``p``.

    For real polynomials the returned roots are made exactly closed under
    conjugation.  Raises :class:`RootFindingError` if the residual test is not
    met within ``cfg.max_iterations`` sweeps.
    """
    cfg = cfg or RootConfig()
    if p.degree < 1:
        raise RootFindingError("polynomial of degree 0 has no roots")
    if p.degree == 1:
        z = np.array([-p.coeffs[0] / p.coeffs[1]])
        return make_rootset(p, z, 0, cfg)
    z, res, converged, iterations = find_roots_batch(p.coeffs[None, :], cfg)
    if not converged[0]:
        raise RootFindingError(
            f"no convergence after {cfg.max_iterations} iterations "
            f"(max residual {res[0].max():.3g})",
            roots=z[0],
            residuals=res[0],
        )
    return make_rootset(p, z[0], iterations[0], cfg)


def separation_report(rs: RootSet, p: Polynomial) -> SimplicityVerdict:
    """Decide whether the roots in ``rs`` are numerically simple.

    Simple means: the nearest pair is more than ``1e-8 * max|z|`` apart,
    ``|P'(z_j)| > 1e-10`` for every root, and no pair of neighbours could be
    merged into a double root by a relative perturbation of ``p`` below
    ``COINCIDENCE_BACKWARD_ERROR``.  The last test is what catches computed
    double roots, which split by about ``sqrt(eps)`` in double precision.
    """
    z = np.asarray(rs.roots)
    dmag = np.abs(poly_eval(p.derivative, z))
    weakest = int(np.argmin(dmag))
    if z.size < 2:
        return SimplicityVerdict(
            simple=bool(dmag[weakest] > DERIVATIVE_ATOL),
            min_separation=float("inf"),
            separation_threshold=0.0,
            closest_pair=None,
            min_derivative=float(dmag[weakest]),
            weakest_root=weakest,
        )

    diff = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(diff, np.inf)
    nearest = np.argmin(diff, axis=1)
    near_dist = diff[np.arange(z.size), nearest]
    i = int(np.argmin(near_dist))
    j = int(nearest[i])
    i, j = min(i, j), max(i, j)
    sep = float(near_dist[i])
    threshold = SEPARATION_RTOL * float(np.max(np.abs(z)))

    # Merging neighbours into their midpoint m perturbs P by about
    # |P''(m)|/2 * (s/2)**2; compare that with the coefficient scale at m.
    mid = 0.5 * (z + z[nearest])
    if p.degree >= 2:
        curvature = 0.5 * np.abs(poly_eval(p.derivative.derivative, mid))
    else:
        curvature = np.zeros(z.size)
    merge_cost = curvature * (0.5 * near_dist) ** 2
    scale = np.abs(_horner_rows(np.abs(p.coeffs)[None, :], np.abs(mid)[None, :])[0])
    hits = np.flatnonzero(merge_cost <= COINCIDENCE_BACKWARD_ERROR * scale)
    coincident = {(min(int(a), int(nearest[a])), max(int(a), int(nearest[a]))) for a in hits}

    simple = sep > threshold and dmag[weakest] > DERIVATIVE_ATOL and not coincident
    return SimplicityVerdict(
        simple=bool(simple),
        min_separation=sep,
        separation_threshold=threshold,
        closest_pair=(i, j),
        min_derivative=float(dmag[weakest]),
        weakest_root=weakest,
        coincident_pairs=tuple(sorted(coincident)),
    )
