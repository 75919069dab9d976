import math

import numpy as np
import pytest

from conftest import AR1, ARCH_AR4, COUNTEREXAMPLE, IN_CLASS_FIXTURES, IPC_AR2, random_class_alpha
from resvec.cpoly import RootSet, find_roots_batch
from resvec.residua import (
    NonSimplePoleError,
    OperatorError,
    QuadratureConfig,
    QuadratureError,
    RationalOperator,
    align_residues,
    check_class,
    operator_new,
    operator_poles,
    order_poles,
    residues_analytic,
    residues_closed_form,
    residues_factored,
    residues_quadrature,
)

SQRT2 = math.sqrt(2.0)

# 40-digit mpmath evaluation of 1/P'(z_j) for the AR(4) operator, rounded.
AR4_RESIDUES = {
    -1.788770830799104252: 0.37108026091819469483,
    1.2266435975748251147: -0.42429024222019910331,
    complex(-0.17128709725586130558, 1.631810021621424164): complex(
        0.026604990651002204242, -0.36565060367909005238
    ),
    complex(-0.17128709725586130558, -1.631810021621424164): complex(
        0.026604990651002204242, 0.36565060367909005238
    ),
}


def analyze(alpha):
    op = RationalOperator(alpha)
    poles = operator_poles(op)
    return op, poles


def test_operator_basic():
    op = operator_new([0.599419])
    assert op.n == 1
    assert op.denominator.coeffs.tolist() == [1.0, -0.599419]


def test_operator_out_of_class_still_constructs():
    assert RationalOperator(COUNTEREXAMPLE).n == 2


def test_operator_zero_leading_rejected():
    with pytest.raises(OperatorError, match="αₙ = 0"):
        RationalOperator((0.5, 0.0))


def test_operator_empty_rejected():
    with pytest.raises(OperatorError):
        operator_new([])


def test_operator_evaluates_reciprocal():
    op = RationalOperator(IPC_AR2)
    z = 0.3 - 0.2j
    assert op(z) == pytest.approx(1 / (1 - 0.584 * z - 0.203494 * z * z))


def test_pole_ordering_descending_modulus():
    _, poles = analyze(ARCH_AR4)
    mods = np.abs(poles.roots)
    assert np.all(np.diff(mods) <= 1e-12)
    # conjugate pair: lower half-plane first (ascending argument)
    assert poles.roots[1].imag < 0 < poles.roots[2].imag


def test_order_poles_ties_by_argument():
    z = np.array([1j, -1j, 2.0])
    assert order_poles(z).tolist() == [2, 1, 0]


def test_check_class_ipc():
    op, poles = analyze(IPC_AR2)
    rep = check_class(op, poles)
    assert rep.condition_I.passed
    assert rep.condition_I.coefficient_sum == pytest.approx(0.787494, abs=1e-15)
    assert rep.condition_I.margin == pytest.approx(0.212506, abs=1e-15)
    assert rep.condition_II.passed and rep.in_class


def test_check_class_counterexample():
    op, poles = analyze(COUNTEREXAMPLE)
    rep = check_class(op, poles)
    assert not rep.condition_I.passed
    assert rep.condition_I.coefficient_sum == 5.0
    assert not rep.condition_II.passed
    assert not rep.condition_II.outside_unit_circle
    assert rep.condition_II.min_pole_modulus == pytest.approx(1 / math.sqrt(3), abs=1e-14)
    assert not rep.in_class


def test_check_class_boundary_sum_fails():
    rep = check_class(RationalOperator((0.5, 0.5)))
    assert not rep.condition_I.passed
    assert rep.condition_I.margin == 0.0


def test_check_class_margin_sign_matches_pass(rng):
    for _ in range(50):
        a = rng.uniform(-0.8, 0.8, rng.integers(1, 5))
        a[-1] = a[-1] or 0.1
        rep = check_class(RationalOperator(a))
        assert (rep.condition_I.margin > 0) == rep.condition_I.passed
        assert rep.in_class == (rep.condition_I.passed and rep.condition_II.passed)


def test_check_class_repeated_pole():
    rep = check_class(RationalOperator((0.6, -0.09)))
    assert rep.condition_I.passed
    assert not rep.condition_II.simplicity.simple
    assert not rep.in_class


def test_condition_one_implies_poles_outside_disk(rng):
    total = 0
    for n in range(1, 9):
        alphas = np.array([random_class_alpha(rng, n) for _ in range(1250)])
        coeffs = np.hstack((np.ones((alphas.shape[0], 1)), -alphas))
        roots, _, converged, _ = find_roots_batch(coeffs)
        assert converged.all()
        assert np.min(np.abs(roots)) > 1.0
        total += alphas.shape[0]
    assert total >= 10_000


def test_residue_ar1():
    op, poles = analyze(AR1)
    rv = residues_analytic(op, poles)
    assert rv.values[0] == pytest.approx(-1.66828212, abs=1e-8)
    assert rv.method == "analytic"


def test_residues_ipc():
    op, poles = analyze(IPC_AR2)
    rv = residues_analytic(op, poles)
    assert poles.roots[0].real == pytest.approx(-4.0756094790, abs=1e-9)
    np.testing.assert_allclose(rv.values, [0.9304713208, -0.9304713208], atol=1e-10)


def test_residues_ar4_against_high_precision():
    op, poles = analyze(ARCH_AR4)
    rv = residues_analytic(op, poles)
    for z, c in AR4_RESIDUES.items():
        k = int(np.argmin(np.abs(poles.roots - z)))
        assert abs(rv.values[k] - c) < 1e-13


def test_residues_counterexample():
    op, poles = analyze(COUNTEREXAMPLE)
    rv = residues_analytic(op, poles)
    for z, c in zip(poles.roots, rv.values):
        expected = -SQRT2 / 4 * 1j if z.imag > 0 else SQRT2 / 4 * 1j
        assert abs(c - expected) < 1e-14


def test_residues_reject_non_simple():
    op = RationalOperator((0.6, -0.09))
    z = 10 / 3
    poles = RootSet(np.array([z, z], dtype=complex), np.zeros(2), np.zeros(2), 0.0, 0, 1e-12)
    with pytest.raises(NonSimplePoleError):
        residues_analytic(op, poles)


@pytest.mark.parametrize("alpha", IN_CLASS_FIXTURES + [COUNTEREXAMPLE])
def test_residue_invariants(alpha):
    op, poles = analyze(alpha)
    rv = residues_analytic(op, poles)
    assert len(rv) == op.n
    for c in rv.values:
        assert np.min(np.abs(rv.values - np.conj(c))) < 1e-9
    if op.n >= 2:
        assert abs(np.sum(rv.values)) < 1e-9


def test_residues_sum_to_zero_random(rng):
    for _ in range(500):
        n = int(rng.integers(2, 9))
        a = rng.uniform(-2, 2, n)
        op, poles = analyze(a)
        rv = residues_analytic(op, poles)
        scale = np.max(np.abs(rv.values))
        assert abs(np.sum(rv.values)) < 1e-9 * max(1.0, scale)


def test_factored_form_agrees(rng):
    for _ in range(100):
        op, poles = analyze(random_class_alpha(rng, int(rng.integers(1, 7))))
        a = residues_analytic(op, poles).values
        f = residues_factored(op, poles).values
        np.testing.assert_allclose(f, a, rtol=1e-9, atol=1e-12)


def test_closed_form_values():
    rv = residues_closed_form(RationalOperator(AR1))
    assert rv.values[0] == pytest.approx(-1 / 0.599419, rel=1e-15)
    rv = residues_closed_form(RationalOperator(IPC_AR2))
    np.testing.assert_allclose(rv.values, [0.9304713208, -0.9304713208], atol=1e-10)
    # "+" branch pole comes first
    assert rv.poles[0].real == pytest.approx(-4.0756094790, abs=1e-9)


def test_closed_form_counterexample_order():
    rv = residues_closed_form(RationalOperator(COUNTEREXAMPLE))
    assert rv.poles[0] == pytest.approx(1 / 3 + SQRT2 / 3 * 1j)
    assert rv.values[0] == pytest.approx(-SQRT2 / 4 * 1j)


def test_closed_form_double_pole():
    with pytest.raises(NonSimplePoleError, match="double pole"):
        residues_closed_form(RationalOperator((0.6, -0.09)))


def test_closed_form_degree_three_unsupported():
    with pytest.raises(NotImplementedError):
        residues_closed_form(RationalOperator((0.1, 0.1, 0.1)))


def test_closed_form_matches_analytic(rng):
    for _ in range(2000):
        n = int(rng.integers(1, 3))
        a = rng.uniform(-3, 3, n)
        op, poles = analyze(a)
        if n == 2 and abs(a[0] ** 2 + 4 * a[1]) < 1e-3:
            continue
        an = residues_analytic(op, poles)
        cf = align_residues(an, residues_closed_form(op))
        np.testing.assert_allclose(cf.values, an.values, rtol=0, atol=1e-10 * max(1, np.abs(an.values).max()))


@pytest.mark.parametrize("alpha", IN_CLASS_FIXTURES + [COUNTEREXAMPLE])
def test_quadrature_matches_analytic(alpha):
    op, poles = analyze(alpha)
    an = residues_analytic(op, poles).values
    qu = residues_quadrature(op, poles).values
    assert np.max(np.abs(an - qu)) < 1e-8


def test_quadrature_simple_value():
    op, poles = analyze((0.5,))
    assert abs(residues_quadrature(op, poles).values[0] - (-2.0)) < 1e-10


def test_quadrature_known_fixture_values():
    op, poles = analyze(AR1)
    assert abs(residues_quadrature(op, poles).values[0] + 1.66828212) < 1e-8
    op, poles = analyze(IPC_AR2)
    np.testing.assert_allclose(
        residues_quadrature(op, poles).values, [0.9304713208, -0.9304713208], atol=1e-8
    )


def test_quadrature_converges_geometrically():
    op, poles = analyze(IPC_AR2)
    exact = residues_analytic(op, poles).values
    errs = [
        np.max(np.abs(residues_quadrature(op, poles, QuadratureConfig(m)).values - exact))
        for m in (8, 16, 32)
    ]
    assert errs[0] > errs[1] > errs[2] or errs[2] < 1e-14
    # neighbour at distance d, circle radius d/4: error ~ 4**-m
    assert errs[0] < 10 * 0.25**8


def test_quadrature_rejects_few_points():
    op, poles = analyze(AR1)
    with pytest.raises(QuadratureError, match="insufficient"):
        residues_quadrature(op, poles, QuadratureConfig(points_per_circle=4))


def test_quadrature_rejects_enclosing_circle():
    op, poles = analyze(IPC_AR2)
    with pytest.raises(QuadratureError, match="enclose"):
        residues_quadrature(op, poles, QuadratureConfig(radius_factor=1.0))


def test_quadrature_is_order_independent():
    op, poles = analyze(ARCH_AR4)
    fwd = residues_quadrature(op, poles).values
    rev = residues_quadrature(op, poles.reordered(np.arange(4)[::-1])).values[::-1]
    assert np.array_equal(fwd, rev)


def test_align_residues_rejects_mismatch():
    op, poles = analyze(IPC_AR2)
    a = residues_analytic(op, poles)
    b = residues_analytic(*analyze(AR1))
    with pytest.raises(ValueError):
        align_residues(a, b)


def test_published_ar4_values_belong_to_negated_coefficients():
    # The published AR(4) residue vector is that of 1/(1 + sum a_j z^j).
    published = np.array(
        [
            0.291604006704114 - 0.300154215080589j,
            0.291604006704114 + 0.300154215080589j,
            -0.291604006704114 - 0.241806751480026j,
            -0.291604006704114 + 0.241806751480026j,
        ]
    )
    op = RationalOperator(tuple(-a for a in ARCH_AR4))
    rv = residues_analytic(op, operator_poles(op))
    nearest = np.abs(published[:, None] - rv.values[None, :]).min(axis=1)
    assert nearest.max() < 1e-9
    assert np.linalg.norm(rv.values) == pytest.approx(0.798284224250679, abs=1e-9)
    assert np.abs(rv.values).max() == pytest.approx(0.418479927304211, abs=1e-9)
