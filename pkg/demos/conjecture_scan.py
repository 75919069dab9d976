"""
Scanning for counterexamples
============================

Random operators with ``sum |a_j| < 1`` are drawn for each degree, and the
smallest margin ``||c||_p - (1/n)**((p-1)/p)`` is tracked.  The margins stay
positive.  In fact the bound follows from ``sum_j c_j / z_j = -1`` together
with ``|z_j| > 1`` and Hoelder's inequality.
"""

from resvec.norms import INF, conjecture_scan

scan = conjecture_scan(n_max=6, trials_per_n=500, ps=(1, 2, INF), seed=42)
print(f"{scan.accepted} of {scan.trials} draws accepted, {len(scan.violations)} violations")
for n in range(1, scan.n_max + 1):
    margins = "  ".join(f"p={p}: {scan.min_margin[(n, p)]:.4f}" for p in scan.ps)
    print(f"n = {n}  min |z| = {scan.min_pole_modulus[n]:.4f}  {margins}")

###############################################################################
# The bound is sharp.  For ``a = (0, ..., 0, s)`` the poles sit on the circle
# ``|z| = s**(-1/n)`` and every residue has modulus ``s**(-1/n) / n``, so all
# margins go to zero as ``s -> 1``.

from resvec import RationalOperator, check_class, operator_poles, residues_analytic, verify_bounds

n = 3
for s in (0.5, 0.9, 0.99, 0.999):
    op = RationalOperator((0.0,) * (n - 1) + (s,))
    poles = operator_poles(op)
    br = verify_bounds(residues_analytic(op, poles), check_class(op, poles), (1, 2, INF))
    print(f"s = {s}: margins " + "  ".join(f"{e.margin:.2e}" for e in br.entries))
