"""
Dihedral angles of the Catalan solids
=====================================

A solid can tile space face to face only if copies fit around each edge.
The rhombic dodecahedron has dihedral angle 2pi/3, three copies close up.
The rhombic triacontahedron has 4pi/5, which goes into a full turn 5/2 times.
"""

from twoorbit import dihedral_angle_cosines, polar_dual, rectify, regular_polytope, turn_fraction

for name, parent in [("rhombic dodecahedron", "{4,3}"), ("rhombic triacontahedron", "{5,3}")]:
    P = polar_dual(rectify(regular_polytope(parent)))
    cosines = set(dihedral_angle_cosines(P))
    (c,) = cosines
    t = turn_fraction(c)
    print(f"{name}: cos = {c}  angle = 2pi*{t['j']}/{t['N']}  copies per turn = {t['copies']}  "
          f"whole number = {t['integral']}")
