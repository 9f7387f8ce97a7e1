"""Benchmark designs and the data-level estimators.

Design I stacks scaled Cholesky blocks of a Toeplitz correlation; Design II
is equicorrelated over an identity block.  On designs with diagonal X'X the
lasso coincides with soft thresholding and the adaptive lasso with adaptive
soft thresholding, componentwise and exactly.
"""

import math

import numpy as np

from threshdist import (DesignSpec, LassoConfig, RegressionData, adaptive_lasso,
                        lasso, least_squares, make_design, threshold_estimate,
                        xi_values)

print("design gallery")
specs = [DesignSpec("I", 8, 4, rho=r) for r in (0.3, 0.5, 0.9)] + \
        [DesignSpec("II", 8, 4, c=c) for c in (0.2, 2.0, -0.2)]
for spec in specs:
    X = make_design(spec)
    G = X.T @ X
    cond = np.linalg.cond(G)
    corr = G[0, 1] / math.sqrt(G[0, 0] * G[1, 1])
    par = f"rho={spec.rho}" if spec.variant == "I" else f"c={spec.c}"
    print(f"  variant {spec.variant} {par:9s} cond(X'X) = {cond:7.2f}   "
          f"corr(x1,x2) = {corr:6.3f}   xi = {np.round(xi_values(X), 3)}")

print("\none draw from the benchmark model (Design I, rho = 0.3)")
rng = np.random.Generator(np.random.Philox(key=np.array([42, 0], dtype=np.uint64)))
X = make_design(DesignSpec("I", 8, 4, rho=0.3))
theta = np.array([3.0, 1.5, 0.0, 0.0])
Y = X @ theta + rng.standard_normal(8)
data = RegressionData(X, Y)
ls, s2 = least_squares(data)
sigma_hat = math.sqrt(s2)
xi = xi_values(X)
eta = 1.959964 / math.sqrt(8)
print(f"  least squares : {np.round(ls, 4)}   sigma_hat = {sigma_hat:.4f}")
for kind in ("hard", "soft", "adaptive"):
    print(f"  {kind:9s}     : {np.round(threshold_estimate(kind, ls, sigma_hat, xi, eta), 4)}")
print(f"  lasso         : {np.round(lasso(data, LassoConfig.eta_xi_inverse(eta), sigma_hat), 4)}")
print(f"  adaptive lasso: {np.round(adaptive_lasso(data, LassoConfig.constant(eta), sigma_hat), 4)}")

print("\nexact coincidence on a diagonal design")
Q, _ = np.linalg.qr(rng.standard_normal((10, 4)))
Xd = Q * np.array([1.4, 0.8, 1.0, 2.0])
Yd = rng.standard_normal(10)
datad = RegressionData(Xd, Yd)
lsd, s2d = least_squares(datad)
sig = math.sqrt(s2d)
xid = xi_values(Xd)
sol = lasso(datad, LassoConfig.eta_xi_inverse(eta), sig)
soft = threshold_estimate("soft", lsd, sig, xid, eta)
print(f"  |lasso - soft thresholding|          = {np.max(np.abs(sol - soft)):.2e}")
sol_a = adaptive_lasso(datad, LassoConfig.constant(eta), sig)
adap = threshold_estimate("adaptive", lsd, sig, xid, eta)
print(f"  |adaptive lasso - adaptive threshold| = {np.max(np.abs(sol_a - adap)):.2e}")
