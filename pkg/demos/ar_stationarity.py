"""
Stationarity of a fitted autoregression
=======================================

Fit an AR model to a simulated series, turn the fitted polynomial into the
rational operator, and read stationarity off its poles and residues.
"""

import numpy as np

from resvec.arts import (
    acf,
    ar_residuals,
    arch_fit,
    fit_ols,
    fit_yule_walker,
    model_mean,
    pacf,
    select_order,
    simulate_ar,
    simulate_arch,
    stationarity_verdict,
)

phi = (0.584, 0.203494)
ts = simulate_ar(phi, 10_000, intercept=0.5, seed=1)
print("sample acf ", np.round(acf(ts, 5), 3))
print("sample pacf", np.round(pacf(ts, 5), 3))

###############################################################################
# The partial autocorrelation cuts off after lag 2.  The information criteria
# agree on the order.

for crit in ("aic", "bic", "hqic"):
    print(crit, "->", select_order(ts, 6, crit))

###############################################################################
# Both estimators land close to the truth.  The process mean is the
# intercept divided by ``1 - sum(phi)``.

yw, ols = fit_yule_walker(ts, 2), fit_ols(ts, 2)
print("Yule-Walker", np.round(yw.phi, 4), " OLS", np.round(ols.phi, 4))
print("mean", model_mean(ols), "expected", 0.5 / (1 - sum(phi)))

rep = stationarity_verdict(ols)
print("verdict:", rep.verdict)
print("pole moduli", rep.poles.moduli, "residues", rep.residues.values.real)

###############################################################################
# A series with an explosive root gives a different verdict.

rng = np.random.default_rng(3)
x = np.zeros(400)
for t in range(1, 400):
    x[t] = 1.02 * x[t - 1] + rng.normal()
print("\nexplosive series:", stationarity_verdict(fit_ols(x, 1)).verdict)

###############################################################################
# Conditional heteroskedasticity: regress squared residuals on their lags.

e = simulate_arch(0.1, [0.5], 10_000, seed=2)
afit = arch_fit(e, 1)
print("\nARCH(1) alpha0 = %.3f alpha1 = %.3f" % (afit.intercept, afit.phi[0]))
print("ARCH operator verdict:", stationarity_verdict(afit).verdict)
