"""Finite-sample laws of the thresholding estimators.

Every centered-and-scaled thresholding estimator has a mixed law: an atom
at -alpha*theta/sigma carrying the deletion probability, plus an absolutely
continuous part.  This script tabulates the cdf and density of all six
variants for one coordinate and shows the hallmark features: the excised
band of hard thresholding and the plateau of its cdf over the band.
"""

import numpy as np

from threshdist import (KINDS, KNOWN, ComponentSpec, VarianceMode, as_mixture,
                        default_eta)

n = 8
eta = default_eta(n)  # deletes a null coordinate with probability 0.95
spec = ComponentSpec(n=n, xi=1.0, theta=1.5, sigma=1.0, eta=eta)
modes = {"known sigma": KNOWN, "estimated sigma (4 dof)": VarianceMode.unknown_sigma(4)}

print(f"coordinate: n={n}, xi=1, theta=1.5, sigma=1, eta={eta:.4f}, "
      f"scaling alpha = sqrt(n)/xi")
print(f"atom sits at -alpha*theta/sigma = {spec.atom_location:.4f}\n")

for label, mode in modes.items():
    print(f"--- {label} ---")
    mixes = {kind: as_mixture(kind, mode, spec) for kind in KINDS}
    w = mixes["hard"].atom_weight
    print(f"deletion probability (same for all kinds): {w:.6f}")
    header = "x".rjust(8) + "".join(f"{kind + ' cdf':>16}{kind + ' pdf':>16}"
                                    for kind in KINDS)
    print(header)
    for x in np.linspace(-6.0, 2.0, 9):
        row = f"{x:8.2f}"
        for kind in KINDS:
            row += f"{mixes[kind].cdf(float(x)):16.6f}{mixes[kind].ac_density(float(x)):16.6f}"
        print(row)
    print()

print("hard thresholding with theta = 0: the cdf is flat across the band")
null_spec = ComponentSpec(n=n, xi=1.0, theta=0.0, sigma=1.0, eta=eta)
hard = as_mixture("hard", KNOWN, null_spec)
band = np.sqrt(n) * eta
for x in np.linspace(-1.2 * band, 1.2 * band, 9):
    inside = "inside excised band" if abs(x) < band else ""
    print(f"  x={x:7.3f}  cdf={hard.cdf(float(x)):.6f}  "
          f"pdf={hard.ac_density(float(x)):.6f}  {inside}")
