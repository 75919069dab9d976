"""
Residue vectors and their norm bounds
=====================================

For ``f(z) = 1 / (1 - a_1 z - ... - a_n z**n)`` with ``sum |a_j| < 1`` the
residues at the poles satisfy ``||c||_p > (1/n)**((p - 1)/p)``.  This walks
through the three worked operators and one that falls outside the class.
"""

import numpy as np

from resvec import (
    RationalOperator,
    check_class,
    operator_poles,
    residues_analytic,
    verify_bounds,
)
from resvec.norms import INF

# A first-order operator has one pole at 1/a_1 and residue -1/a_1.
op = RationalOperator((0.599419,))
poles = operator_poles(op)
print("AR(1) pole", poles.roots[0], "residue", residues_analytic(op, poles).values[0])

###############################################################################
# Second order: the consumer price index fit.  Both poles are real and the
# residues are +/- 1/sqrt(a_1**2 + 4 a_2).

op = RationalOperator((0.584, 0.203494))
poles = operator_poles(op)
cls = check_class(op, poles)
rv = residues_analytic(op, poles)
print("\nAR(2) poles", poles.roots.real, "moduli", poles.moduli)
print("residues", rv.values.real, "in class:", cls.in_class)
for e in verify_bounds(rv, cls, (1, 2, INF)).entries:
    print(f"  p = {e.p}: {e.norm_value:.8f} > {e.lower_bound:.8f} ? {e.holds}")

###############################################################################
# Fourth order, with two conjugate pole pairs.  The residues of a real
# operator come in conjugate pairs too, and they sum to zero.

op = RationalOperator((0.128940, 0.116899, 0.153156, 0.169289))
poles = operator_poles(op)
rv = residues_analytic(op, poles)
np.set_printoptions(precision=6, suppress=True)
print("\nAR(4) poles   ", poles.roots)
print("residues      ", rv.values)
print("sum           ", rv.values.sum())
br = verify_bounds(rv, check_class(op, poles), (1, 2, 3, INF))
print("bounds hold:", br.all_hold)

###############################################################################
# Outside the class the bound can fail.  With a = (2, -3) both poles lie
# inside the unit disk and every norm falls short; the report is marked
# advisory because the hypotheses are not met.

op = RationalOperator((2.0, -3.0))
poles = operator_poles(op)
cls = check_class(op, poles)
br = verify_bounds(residues_analytic(op, poles), cls)
print("\n(2, -3): condition I", cls.condition_I.passed, "condition II", cls.condition_II.passed)
for e in br.entries:
    print(f"  p = {e.p}: {e.norm_value:.6f} vs {e.lower_bound:.6f} holds={e.holds}")
print("advisory:", br.advisory)
