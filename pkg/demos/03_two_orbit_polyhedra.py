"""
The four two-orbit convex polyhedra
===================================

Rectify the cube and dodecahedron, then take polar duals.  Each result has
exactly two flag orbits; the class symbol records which adjacencies stay
inside an orbit.
"""

from twoorbit import (
    combinatorial_automorphisms,
    face_orbit_counts,
    flag_orbits,
    geometric_symmetries,
    orbit_class,
    polar_dual,
    quasiregular_check,
    rectify,
    regular_polytope,
    section_regularity_audit,
)

co = rectify(regular_polytope("{4,3}"))
ic = rectify(regular_polytope("{5,3}"))
solids = {
    "cuboctahedron": co,
    "icosidodecahedron": ic,
    "rhombic dodecahedron": polar_dual(co),
    "rhombic triacontahedron": polar_dual(ic),
}

for name, P in solids.items():
    L = P.lattice
    G = geometric_symmetries(P)
    Gam = combinatorial_automorphisms(L)
    print(f"{name:24s} flags={L.n_flags}  |G|={G.order}  |Gamma|={Gam.order}  "
          f"orbits={flag_orbits(G).n_orbits}  transitivity={face_orbit_counts(G)}  "
          f"class={orbit_class(L, G)}  quasiregular={quasiregular_check(P, G)}")

# sections below or above the intransitive rank are regular
audit = section_regularity_audit(co.lattice, geometric_symmetries(co))
print("cuboctahedron section audit: j =", audit["j"], " ok =", audit["ok"])
