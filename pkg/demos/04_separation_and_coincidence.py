"""
Separating multiplier topologies, and where they agree
======================================================

Rescaled coordinate projections ``x_n = E_n / mu_n`` have constant seminorm 1
against the diagonal witness in ``I`` but small seminorms against every
member of ``J`` in the test catalogue.  On bounded nets the Hilbert-Schmidt
seminorms and the ``L^(p,q)`` seminorms decay together.
"""

import numpy as np

from opideal.snorms import INF, LorentzIndex
from opideal.topology_lab import (
    SeparationExperiment,
    bounded_coincidence,
    needapprox_demo,
    run_separation,
    separation_pairs,
)

L = LorentzIndex

e = SeparationExperiment.build(L(INF, INF, True), L(2, 2), 10**4)
r = run_separation(e)
print("compacts vs Hilbert-Schmidt, witness", e.witness)
for n in (1, 10, 100, 1000, 9999):
    print(f"   n={n:5}  I side {r.i_side_values[n]:.3f}   J side running min {r.j_side_min_curve[n]:.5f}")
print("   verdict:", r.verdict)

print("\nall strictly ordered approximable pairs at dim 10^4:")
worst = 0.0
for I, J in separation_pairs():
    rr = run_separation(SeparationExperiment.build(I, J, 10**4))
    worst = max(worst, rr.j_side_min_curve[-1])
    assert rr.verdict
print(f"   {len(separation_pairs())} pairs separate; largest final J-side value {worst:.4f}")

print("\nbounded truncation nets, dim 128 (crossing = first k staying below 0.1):")
for idx in (L(1, 1), L(2, 2), L(3, 1), L(INF, INF, True)):
    c = bounded_coincidence(idx, dim=128)
    print(f"   {str(idx):13} HS crossing {c.hs_crossing}, idx crossing {c.idx_crossing}, joint {c.joint}")

u = bounded_coincidence(L(3, 1), dim=64, net_size=6, net="unitary")
print("   unitary net:", np.round(u.hs_curve, 3), "converges:", u.hs_converges)

rep = needapprox_demo(64)
print("\nweak-trace seminorm of the tail (1 - E_n) D, D = diag(1/k):")
for n in (0, 8, 16, 32, 48, 62):
    print(f"   n={n:2}  seminorm {rep.seminorm_curve[n]:.4f}  strong proxy {rep.strong_curve[n]:.4f}"
          f"  infinite tail {rep.analytic_tail[n]:.4f}")
