"""
Residues by contour quadrature
==============================

The residue at a pole is ``(1 / 2 pi i)`` times the integral of ``f`` round a
small circle.  The periodic trapezoidal rule converges geometrically here, so a
few hundred nodes match ``1 / P'(z_j)`` to rounding error.
"""

import numpy as np

from resvec import RationalOperator, operator_poles, residues_analytic
from resvec.residua import QuadratureConfig, QuadratureError, residues_quadrature

op = RationalOperator((0.584, 0.203494))
poles = operator_poles(op)
exact = residues_analytic(op, poles).values

print(" m     max |quadrature - analytic|")
for m in (8, 12, 16, 24, 32, 64, 256):
    approx = residues_quadrature(op, poles, QuadratureConfig(m, 0.25)).values
    print(f"{m:3d}   {np.max(np.abs(approx - exact)):.3e}")

###############################################################################
# The error falls like ``rho**m``, so a larger circle needs more nodes.  The
# circle must stay clear of the neighbouring pole.

for rho in (0.1, 0.5, 0.9):
    approx = residues_quadrature(op, poles, QuadratureConfig(32, rho)).values
    print(f"rho = {rho}: {np.max(np.abs(approx - exact)):.3e}")

try:
    residues_quadrature(op, poles, QuadratureConfig(32, 1.0))
except QuadratureError as exc:
    print("rho = 1.0:", exc)
