"""
Factoring through an intermediate ideal
=======================================

For each supported pattern, split a member of ``I`` as ``s * t`` with ``s`` in
``J`` and ``t`` a multiplier from ``J`` into ``I``; then watch the seminorm
transfer bound on random contractions.
"""

import numpy as np

from opideal.ideals import CriticalStripError, block_factorization, factorize
from opideal.sequences import PowerLogFamily, materialize
from opideal.snorms import INF, LorentzIndex
from opideal.topology_lab import ordering_consistency

L = LorentzIndex

examples = [
    ("I", PowerLogFamily(1, 1.0, 0), L(2, 1), L(2, 2)),
    ("II", PowerLogFamily(1, 0.9, 0), L(1.5, INF, True), L(3, 1)),
    ("III", PowerLogFamily(1, 0.5, 2), L(2, 2), L(2, INF, True)),
    ("IV", PowerLogFamily(1, 1.5, 0), L(1, 1), L(2, 1)),
]
for case, f, I, J in examples:
    w = factorize(f, I, J)
    print(f"case {case}: I={I}, J={J}")
    print(f"   s = {w.s}")
    print(f"   t = {w.t}")
    for c in w.certificates:
        print(f"   [{'ok' if c.passed else '??'}] {c.claim}: rule={c.analytic}, oracle={c.numeric}")

# Concrete sequences use the formulas directly
mu = materialize(PowerLogFamily(1, 1, 0), 2**14)
s, t = factorize(mu, L(2, 2), L(2, INF, True)).arrays()
print("\ncase III on a concrete harmonic sequence: max relative error",
      np.max(np.abs(s * t - mu.values) / mu.values))

# On the slow strip of case II no power-log split is offered
try:
    factorize(PowerLogFamily(1, 1 / 1.5, 0.5), L(1.5, INF, True), L(3, 1))
except CriticalStripError as exc:
    print("refused:", exc)

# The block construction behind approximability
s, t, starts = block_factorization(materialize(PowerLogFamily(1, 1.2, 0), 4096), L(2, 2))
levels = sorted({float(v) for v in t}, reverse=True)
print("\nblock starts:", starts[:8], "...  t on blocks:", levels[:6])

# Seminorm transfer along a factorization, 20 random contractions
rep = ordering_consistency(PowerLogFamily(1, 1.0, 0), L(2, 1), L(2, 2), dim=64, trials=20)
print(f"\ntransfer constant {rep.constant:.4f}; largest lhs/(C rhs) = {np.max(rep.ratios):.4f}")
