"""
Two-orbit polygons
==================

A 2n-gon with equal angles and edges alternating 1 and lambda, and its
polar dual with equal edges and alternating angles.  Combinatorially both
are regular; geometrically they have two flag orbits unless lambda = 1.
"""

from fractions import Fraction

from twoorbit import combinatorial_automorphisms, flag_orbits, geometric_symmetries, orbit_class, polygon_two_orbit

for n in (2, 3, 4, 5, 6):
    for variant in ("edge_alternating", "angle_alternating"):
        P = polygon_two_orbit(n, 2, variant)
        G = geometric_symmetries(P)
        Gam = combinatorial_automorphisms(P.lattice)
        print(f"{2 * n:2d}-gon {variant:18s} flags={P.lattice.n_flags:2d}  |G|={G.order:2d}  "
              f"|Gamma|={Gam.order:2d}  class={orbit_class(P.lattice, G)}")

P = polygon_two_orbit(3, Fraction(1), "edge_alternating")
print("lambda = 1 hexagon orbits:", flag_orbits(geometric_symmetries(P)).n_orbits)
