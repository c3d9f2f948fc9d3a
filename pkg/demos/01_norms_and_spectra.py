"""
Characteristic numbers and Lorentz norms
========================================

Singular values of a small operator, then several norms of the same sequence.
"""

import numpy as np

from opideal.snorms import INF, LorentzIndex, catalog, lorentz_norm, lorentz_quasinorm, schatten_norm
from opideal.spectra import characteristic_numbers, random_unitary

rng = np.random.default_rng(0)

# A 6x6 operator whose singular values we know: U diag(d) V
d = np.array([3.0, 2.0, 1.0, 0.5, 0.25, 0.0])
U, V = random_unitary(6, rng), random_unitary(6, rng)
T = U @ np.diag(d) @ V
mu = characteristic_numbers(T)
print("mu(T)          :", np.round(mu.values, 12))
print("LAPACK check   :", np.round(np.linalg.svd(T, compute_uv=False), 12))

# Schatten norms interpolate between the trace norm and the operator norm
for p in (1, 1.5, 2, INF):
    print(f"Schatten p={p!s:4}: {schatten_norm(mu, p):.6f}")

# Lorentz norms over the fixed catalogue, normalized so rank one gives mu_0
print()
print(f"{'index':16} {'norm':>10} {'raw':>10} {'quasi':>10}")
for idx in catalog():
    try:
        quasi = f"{lorentz_quasinorm(mu, idx):10.6f}"
    except ValueError:
        quasi = f"{'-':>10}"
    print(f"{str(idx):16} {lorentz_norm(mu, idx):10.6f} {lorentz_norm(mu, idx, normalized=False):10.6f} {quasi}")

# The weak-trace norm looks at sigma_n / log n
print()
print("(1,inf) raw norm of (1,1,1):", lorentz_norm([1, 1, 1], LorentzIndex(1, INF), normalized=False))
