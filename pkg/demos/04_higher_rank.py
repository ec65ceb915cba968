"""
Rank four: rectified polytopes and the demicube
===============================================

Rectifying a regular 4-polytope leaves three flag orbits, not two.  The
alternate vertices of the 4-cube form a regular cross-polytope.
"""

from twoorbit import demicube_check, flag_orbits, geometric_symmetries, rectify, regular_polytope
from twoorbit.census import OutOfScope, build_named

for symbol in ["{3,3,3}", "{3,4,3}"]:
    P = rectify(regular_polytope(symbol))
    G = geometric_symmetries(P)
    print(f"rectified {symbol}: flags={P.lattice.n_flags}  |G|={G.order}  orbits={flag_orbits(G).n_orbits}")

rep = demicube_check(4)
print("demicube: axes =", rep["axes"], " orthogonal =", rep["orthogonal"],
      " |G| =", rep["order"], " orbits =", rep["orbits"], " cross-polytope =", rep["cross_polytope"])

# the snub 24-cell is documented only
try:
    build_named("snub_24_cell")
except OutOfScope as exc:
    print("snub 24-cell reference numbers:", exc.oracle)
