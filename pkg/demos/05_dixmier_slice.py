"""
Dixmier traces on the measurable slice
======================================

Least-squares slope of ``sigma_N`` against ``log N`` over the window
``N_max / 8 .. N_max``.
"""

import numpy as np

from opideal.dixmier import continuity_ratio, dixmier_estimate
from opideal.sequences import ExplicitFamily, FamilySum, PowerLogFamily

harmonic = PowerLogFamily(1, 1, 0)
e = dixmier_estimate(harmonic)
print(f"harmonic: slope {e.value:.8f}, intercept {e.fit[1]:.6f} (Euler gamma {np.euler_gamma:.6f})")
print(f"          raw sigma_N / log N at N = 10^6: {e.sigma[-1] / np.log(1e6):.6f}")

for c in (0.5, 2.0, 7.0):
    print(f"scale {c}: slope {dixmier_estimate(PowerLogFamily(c, 1, 0)).value:.8f}")

print("harmonic + harmonic:", round(dixmier_estimate(FamilySum(harmonic, harmonic)).value, 6))

loglog = ExplicitFamily(lambda n: 1 / ((n + 2) * np.log(n + 2)), "1/((n+2) log(n+2))")
loglog2 = ExplicitFamily(lambda n: 1 / ((n + 2) * np.log(n + 2) ** 2), "1/((n+2) log^2(n+2))")
print()
print("members of the approximable part still leave a finite-N slope:")
for f in (PowerLogFamily(1, 1.5, 0), PowerLogFamily(1, 1, 2), loglog2, loglog,
          PowerLogFamily(1, 1.1, 0), PowerLogFamily(1, 1.1, -1)):
    for N in (10**4, 10**6):
        print(f"   {str(f):60} N_max={N:>8}: slope {dixmier_estimate(f, N).value:.5f}")

print("\ncontinuity ratio for a log^2 perturbation:",
      round(continuity_ratio(harmonic, PowerLogFamily(1, 1, 2)), 5))
