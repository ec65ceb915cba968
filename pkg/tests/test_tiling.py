from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_flags, isometric_automorphism_count, quotient_flag_shapes
from twoorbit import (
    PHI,
    QNum,
    build_named,
    build_tiling,
    combinatorial_automorphisms,
    dihedral_angle_cosines,
    flag_orbits,
    is_isomorphic,
    section,
    tiling_orbit_report,
    torus_quotient,
    turn_fraction,
    verify_axioms,
)
from twoorbit.lattice import flag_graph_connected
from twoorbit.tiling import TILING_NAMES, dual_tiling, lattice_automorphisms

COUNTS = {
    "apeirogon_alt": (2, 2),
    "square": (1, 2, 1),
    "triangular": (1, 3, 2),
    "hexagonal": (2, 3, 1),
    "rhombus": (1, 2, 1),
    "rectangle": (1, 2, 1),
    "trihexagonal": (3, 6, 3),
    "rhombille": (3, 6, 3),
    "cubic": (1, 3, 3, 1),
    "tet_oct": (1, 6, 8, 3),
    "rhombic_dodec": (3, 8, 6, 1),
}


@pytest.mark.parametrize("name", sorted(COUNTS))
def test_faces_per_translation_cell(name):
    assert build_tiling(name).counts == COUNTS[name]


@pytest.mark.parametrize("name", TILING_NAMES)
def test_quotients_are_polytopes(name):
    Q = torus_quotient(build_tiling(name), 3)
    L = Q.lattice
    assert verify_axioms(L).ok
    assert flag_graph_connected(L)
    assert L.f_vector == tuple(c * 3 ** Q.d for c in build_tiling(name).counts)


@pytest.mark.parametrize("name", ["apeirogon_alt", "square", "triangular", "hexagonal", "rhombus",
                                  "rectangle", "trihexagonal", "rhombille", "rhombus_strip"])
def test_quotient_order_matches_isometry_oracle(name):
    Q = torus_quotient(build_tiling(name), 3)
    G = Q.group
    assert G.order == isometric_automorphism_count(Q.lattice, quotient_flag_shapes(Q))
    assert (flag_orbits(G).sizes == G.order).all()


def test_quotient_flags_match_brute_force():
    Q = torus_quotient(build_tiling("trihexagonal"), 3)
    assert len(brute_flags(Q.lattice)) == Q.lattice.n_flags


def test_small_quotients_are_rejected():
    with pytest.raises(ValueError):
        torus_quotient(build_tiling("square"), 2)


@pytest.mark.parametrize(
    "gram,count",
    [
        ([[1, 0], [0, 1]], 8),
        ([[1, Fraction(-1, 2)], [Fraction(-1, 2), 1]], 12),
        ([[1, 0], [0, 4]], 4),
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 48),
        ([[1]], 2),
    ],
)
def test_lattice_automorphism_counts(gram, count):
    Ms = lattice_automorphisms(gram)
    G = np.array(gram, dtype=object)
    assert len(Ms) == count
    for M in Ms:
        assert (M.T.astype(object) @ G @ M.astype(object) == G).all()


def test_tet_oct_vertex_figure_is_cuboctahedron():
    Q = torus_quotient(build_tiling("tet_oct"), 3)
    S = section(Q.lattice, (0, 0), (4, 0))
    assert is_isomorphic(S, build_named("cuboctahedron").lattice)


def test_dual_of_trihexagonal_is_rhombille():
    a = torus_quotient(dual_tiling(build_tiling("trihexagonal")), 3)
    b = torus_quotient(build_tiling("rhombille"), 3)
    assert is_isomorphic(a.lattice, b.lattice)


def test_dual_of_square_tiling_is_square_tiling():
    a = torus_quotient(dual_tiling(build_tiling("square")), 3)
    b = torus_quotient(build_tiling("square"), 3)
    assert is_isomorphic(a.lattice, b.lattice)


def test_rhombus_tiling_is_combinatorially_square():
    # the squashed square tiling: geometrically two-orbit, combinatorially regular
    Q = torus_quotient(build_tiling("rhombus"), 3)
    Gam = combinatorial_automorphisms(Q.lattice)
    assert flag_orbits(Gam).n_orbits == 1
    assert flag_orbits(Q.group).n_orbits == 2


def test_report_fields():
    r = tiling_orbit_report(build_tiling("trihexagonal"), 3)
    assert r["flags_per_cell"] == 24  # 3 vertices, 4 edges each, 2 faces per edge
    assert r["order"] == 108 and r["point_group"] == 12
    assert r["free"]
    assert r["class"] == "2_{0,1}"


def test_to_dict_has_periodic_header():
    data = torus_quotient(build_tiling("square"), 3).to_dict()
    assert data["periodic"]["k"] == 3 and data["periodic"]["d"] == 2


@settings(max_examples=8, deadline=None)
@given(st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=5).filter(lambda x: x != 1))
def test_rhombus_and_rectangle_ratios(ratio):
    for name, want in (("rectangle", "2_{0,2}"), ("rhombus", "2_{1}")):
        r = tiling_orbit_report(build_tiling(name, ratio=ratio), 3)
        assert r["orbits"] == 2 and r["class"] == want


# -- dihedral angles ------------------------------------------------------

def test_cube_dihedral_angle_is_right():
    cs = set(dihedral_angle_cosines(build_named("cube")))
    assert cs == {QNum(0)}
    t = turn_fraction(QNum(0))
    assert (t["N"], t["j"], t["integral"]) == (4, 1, True)


@pytest.mark.parametrize(
    "c,N,j",
    [
        (QNum(1), 1, 0),
        (QNum(-1), 2, 1),
        (QNum(1) / 2, 6, 1),
        (QNum(-1) / 2, 3, 1),
        ((PHI - 1) / 2, 5, 1),
        (-PHI / 2, 5, 2),
        (QNum(0, 1, 2) / 2, 8, 1),
        (QNum(0, -1, 2) / 2, 8, 3),
        (QNum(0, 1, 3) / 2, 12, 1),
        (QNum(0, -1, 3) / 2, 12, 5),
    ],
)
def test_turn_fractions(c, N, j):
    t = turn_fraction(c)
    assert (t["N"], t["j"]) == (N, j)
    assert t["integral"] == (j == 1)


def test_irrational_turn_is_not_found():
    t = turn_fraction(QNum(1) / 3)
    assert t["N"] is None and not t["integral"]


def test_dodecahedron_angle_does_not_fill_space():
    cs = set(dihedral_angle_cosines(build_named("dodecahedron")))
    assert len(cs) == 1
    assert turn_fraction(cs.pop())["N"] is None


def test_quotient_symmetries_accepts_tiling_and_scale():
    from twoorbit import quotient_symmetries

    T = build_tiling("square")
    assert quotient_symmetries(T, 4).order == 8 * 16
    Q = torus_quotient(T, 3)
    assert quotient_symmetries(Q).order == 8 * 9
    with pytest.raises(ValueError):
        quotient_symmetries(Q, 4)


def test_quasiregular_tilings():
    from twoorbit import quasiregular_check

    assert quasiregular_check(torus_quotient(build_tiling("tet_oct"), 3))
    assert quasiregular_check(torus_quotient(build_tiling("trihexagonal"), 3))
    assert not quasiregular_check(torus_quotient(build_tiling("cubic"), 3))
    assert not quasiregular_check(torus_quotient(build_tiling("rhombille"), 3))
