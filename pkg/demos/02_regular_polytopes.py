"""
Regular polytopes from reflection groups
========================================

The coset construction turns a finite reflection group into a face
lattice, and the Wythoff point gives exact coordinates.
"""

import time

from twoorbit import flag_orbits, geometric_symmetries, regular_polytope
from twoorbit.coxeter import enumerate_group, group_for_symbol

for symbol in ["{3,3}", "{4,3}", "{5,3}", "{3,4,3}", "{3,3,5}"]:
    t0 = time.perf_counter()
    P = regular_polytope(symbol)
    G = geometric_symmetries(P)
    print(f"{symbol:8s} f={P.lattice.f_vector}  flags={P.lattice.n_flags:6d}  "
          f"|G|={G.order:6d}  orbits={flag_orbits(G).n_orbits}  ({time.perf_counter() - t0:.2f} s)")

# the group itself: 14400 exact 4x4 matrices over Q(sqrt 5)
g = group_for_symbol("{3,3,5}")
print("|H4| =", len(enumerate_group(g)))
