"""
Periodic tilings through torus quotients
========================================

A periodic tiling is stored by one translation class per face.  Dividing
by ``k Z^d`` gives a finite polytope-like complex whose symmetries are the
tiling symmetries modulo ``k Z^d``.  Per-cell counts do not depend on k.
"""

from twoorbit import build_tiling, tiling_orbit_report, torus_quotient
from twoorbit.lattice import is_isomorphic, section
from twoorbit.census import build_named

for name in ["square", "rhombus", "rectangle", "trihexagonal", "rhombille", "rhombus_strip",
             "tet_oct", "rhombic_dodec"]:
    T = build_tiling(name)
    r3, r4 = (tiling_orbit_report(T, k) for k in (3, 4))
    same = all(r3[key] == r4[key] for key in ("orbits", "transitivity", "class", "flags_per_cell"))
    print(f"{name:14s} orbits={r3['orbits']}  transitivity={r3['transitivity']}  class={r3['class']:10s}  "
          f"point group={r3['point_group']:2d}  k=3/k=4 agree={same}")

# every vertex of the tetrahedral-octahedral honeycomb sees a cuboctahedron
Q = torus_quotient(build_tiling("tet_oct"), 3)
vf = section(Q.lattice, (0, 0), (4, 0))
print("tet_oct vertex figure is a cuboctahedron:", is_isomorphic(vf, build_named("cuboctahedron").lattice))
