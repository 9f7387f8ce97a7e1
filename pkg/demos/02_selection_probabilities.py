"""Variable deletion probabilities, finite-sample and in the limit.

The probability of setting a coordinate exactly to zero is the same for
hard, soft and adaptive soft thresholding.  Finite-sample values come from
normal (known sigma) or non-central t (estimated sigma) masses; the
moving-parameter limits depend on the tuning regime.
"""

import math

from threshdist import (ComponentSpec, KNOWN, RegimeParams, VarianceMode,
                        deletion_probability, default_eta,
                        limit_selection_probability, uniform_rate)

print("finite-sample deletion probability against the coordinate size")
print("(n = 8, xi = 1, sigma = 1, default tuning)\n")
eta = default_eta(8)
print(f"{'theta':>8}{'known':>12}{'4 dof':>12}{'64 dof':>12}")
for theta in (0.0, 0.5, 1.0, 1.5, 3.0):
    spec = ComponentSpec(8, 1.0, theta, 1.0, eta)
    row = [deletion_probability(spec, KNOWN),
           deletion_probability(spec, VarianceMode.unknown_sigma(4)),
           deletion_probability(spec, VarianceMode.unknown_sigma(64))]
    print(f"{theta:8.2f}" + "".join(f"{v:12.6f}" for v in row))

print("\nwith few residual degrees of freedom the t mass is well below the")
print("0.95 that the tuning rule guarantees in the known-sigma case.\n")

print("limiting deletion probabilities by regime")
inf = math.inf
cases = [
    ("conservative, known, nu=0, e=1.96", "known",
     RegimeParams(e=1.959964, nu=0.0)),
    ("conservative, 4 dof, nu=0, e=1.96", "unknown",
     RegimeParams(e=1.959964, nu=0.0, dof=4)),
    ("consistent, known, |zeta|<1", "known", RegimeParams(e=inf, zeta=0.5)),
    ("consistent, known, |zeta|>1", "known", RegimeParams(e=inf, zeta=1.5)),
    ("consistent, known, |zeta|=1, r=0.3", "known",
     RegimeParams(e=inf, zeta=1.0, r=0.3)),
    ("consistent, 4 dof, zeta=1", "unknown", RegimeParams(e=inf, zeta=1.0, dof=4)),
    ("consistent, dof->inf slowly (d=1, r=0)", "unknown",
     RegimeParams(e=inf, zeta=1.0, dof=inf, d=1.0, r=0.0)),
]
for label, mode, params in cases:
    print(f"  {label:45s} -> {limit_selection_probability(params, mode):.6f}")

print("\nuniform consistency rates: min(sqrt(n)/xi, 1/(xi*eta))")
for n in (100, 10_000):
    for rule, eta_n in [("conservative eta = 1.96/sqrt(n)", 1.959964 / math.sqrt(n)),
                        ("consistent   eta = n^(-1/4)", n ** -0.25)]:
        print(f"  n={n:6d}  {rule:32s} rate = {uniform_rate(n, 1.0, eta_n):10.2f}"
              f"   (sqrt(n) = {math.sqrt(n):.0f})")
