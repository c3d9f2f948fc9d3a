"""
Membership and inclusion
========================

Which power-log sequences ``C (n+1)^-a log(n+e)^-b`` belong to which Lorentz
ideal, and how the exponent rules compare with the asymptotic oracle.
"""

import itertools

from opideal.ideals import divergence_oracle, includes, member, non_inclusion_witness
from opideal.sequences import PowerLogFamily
from opideal.snorms import INF, LorentzIndex, catalog

L = LorentzIndex

# Around the critical line a = 1/2 of the Hilbert-Schmidt class
hs = L(2, 2)
print(f"{'a':>5} {'b':>5}  rule    oracle       boundary")
for a, b in [(0.8, 0), (0.5, 0), (0.5, 0.5), (0.5, 1), (0.4, 3)]:
    f = PowerLogFamily(1, a, b)
    v, o = member(f, hs), divergence_oracle(f, hs)
    print(f"{a:5} {b:5}  {str(v.member):6}  {o.verdict:11}  {v.boundary}")

# The inclusion order among the catalogue indices
cat = catalog()
print()
print("inclusions (row inside column):")
print(" " * 16 + " ".join(f"{i:>3}" for i in range(len(cat))))
for k, x in enumerate(cat):
    row = " ".join(f"{'x' if includes(x, y) else '.':>3}" for y in cat)
    print(f"{k:2} {str(x):13}{row}")

# One family per non-inclusion, inside the first ideal and outside the second
print()
for x, y in [(L(INF, INF, True), L(2, 2)), (L(2, INF), L(2, 2)), (L(3, 3), L(2, 2)), (L(2, 2), L(2, 1))]:
    f = non_inclusion_witness(x, y)
    print(f"{str(x):13} not in {str(y):8}: a={f.a:.4g}, b={f.b:.4g}")

# Count how often the oracle is decisive on a coarse grid
grid = itertools.product([0.3, 0.5, 0.8, 1.0, 1.2], [-1, 0, 0.5, 1, 2], cat)
agree = total = 0
for a, b, idx in grid:
    f = PowerLogFamily(1, a, b)
    o = divergence_oracle(f, idx)
    if o.member is not None:
        total += 1
        agree += o.member == member(f, idx).member
print(f"\noracle agrees with the exponent rules on {agree}/{total} decisive cases")
