from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_automorphisms, isometric_automorphism_count, polytope_flag_shapes, stabilizer_count
from twoorbit import (
    ClassSymbol,
    build_named,
    chain_orbits,
    combinatorial_automorphisms,
    face_orbit_counts,
    flag_orbits,
    geometric_symmetries,
    lattice_from_vertex_facet,
    orbit_class,
    polygon_two_orbit,
    quasiregular_check,
    restricted_subgroup,
    section_regularity_audit,
)
from twoorbit.exact import QArray
from twoorbit.geometry import GeoPolytope, centered
from twoorbit.symmetry import audit_two_orbit, is_flag_automorphism, symmetry_matrix

ORACLE_NAMES = ["tetrahedron", "cube", "octahedron", "cuboctahedron", "rhombic_dodecahedron",
                "icosidodecahedron", "rectified_4_simplex", "edge_alt_8gon", "angle_alt_10gon",
                "regular_12gon", "demicube_4"]


@pytest.mark.parametrize("name", ORACLE_NAMES)
def test_geometric_order_matches_isometry_oracle(name):
    P = build_named(name)
    G = geometric_symmetries(P)
    assert G.order == isometric_automorphism_count(P.lattice, polytope_flag_shapes(P))


@pytest.mark.parametrize("name", ORACLE_NAMES)
def test_combinatorial_group_matches_exhaustive(name):
    L = build_named(name).lattice
    fast = combinatorial_automorphisms(L)
    slow = combinatorial_automorphisms(L, exhaustive=True)
    assert fast.order == slow.order == len(brute_automorphisms(L))
    assert flag_orbits(fast).n_orbits == flag_orbits(slow).n_orbits


@pytest.mark.parametrize("name", ["cube", "cuboctahedron", "rhombic_triacontahedron", "24_cell"])
def test_symmetry_generators_are_isometries(name):
    P = build_named(name)
    G = geometric_symmetries(P)
    C = centered(P)
    V = C.vertices
    for vp in G.vertex_gens:
        M = symmetry_matrix(P, vp)
        assert M.T @ P.gram @ M == P.gram
        # M maps each vertex to its image
        assert (V @ M.T) == QArray(V.P[vp], V.Q[vp], V.r, V.D)
    for g in G.flag_gens:
        assert is_flag_automorphism(P.lattice, g)


def test_free_action_on_flags():
    for name in ["cuboctahedron", "rectified_4_simplex", "rhombic_dodecahedron"]:
        G = geometric_symmetries(build_named(name))
        part = flag_orbits(G)
        assert (part.sizes == G.order).all()


def test_class_symbols():
    assert str(ClassSymbol(1, 3)) == "regular"
    assert str(ClassSymbol(2, 3, frozenset({0, 1}))) == "2_{0,1}"
    assert str(ClassSymbol(3, 4)) == "3-orbit"
    s = ClassSymbol(2, 3, frozenset({0, 1}))
    assert s.intransitive_rank == 2
    assert s.dual() == ClassSymbol(2, 3, frozenset({1, 2}))
    assert s.dual().intransitive_rank == 0
    assert ClassSymbol(2, 2, frozenset({0, 1})).intransitive_rank is None


def test_dual_class_of_catalan_solids(cubocta):
    L = cubocta.lattice
    rd = build_named("rhombic_dodecahedron")
    a = orbit_class(L, geometric_symmetries(cubocta))
    b = orbit_class(rd.lattice, geometric_symmetries(rd))
    assert a.dual() == b


def test_face_orbits_of_cuboctahedron(cubocta):
    G = geometric_symmetries(cubocta)
    assert face_orbit_counts(G) == (1, 1, 2)
    # triangles and squares
    from twoorbit.symmetry import face_orbits

    part = face_orbits(G, 2)
    sizes = sorted(len(cubocta.lattice.faces[2][int(np.flatnonzero(part.labels == o)[0])]) for o in range(2))
    assert sizes == [3, 4]


def test_chain_orbits(cubocta):
    G = geometric_symmetries(cubocta)
    assert chain_orbits(G, None, {2}).n_orbits == 1
    assert chain_orbits(G, None, {0}).n_orbits == 2
    assert chain_orbits(G, None, {0, 1, 2}).n_orbits == 1


@pytest.mark.parametrize(
    "name,F,G",
    [
        ("cuboctahedron", (0, 0), (3, 0)),
        ("cuboctahedron", (-1, 0), (2, 0)),
        ("cuboctahedron", (-1, 0), (2, 1)),
        ("cuboctahedron", (0, 0), (2, None)),
        ("rectified_4_simplex", (0, 0), (4, 0)),
        ("rectified_4_simplex", (-1, 0), (3, 0)),
        ("rectified_4_simplex", (1, 0), (4, 0)),
        ("cube", (-1, 0), (2, 0)),
    ],
)
def test_restricted_subgroup_matches_direct_stabilizer(name, F, G):
    P = build_named(name)
    L = P.lattice
    if G[1] is None:
        G = (G[0], L.up_of(F[0], F[1])[0] if G[0] == F[0] + 1 else next(iter(L.faces_above(*F)[G[0]])))
    grp = geometric_symmetries(P, keep_elements=True)
    R = restricted_subgroup(grp, L, F, G)
    assert R.order == stabilizer_count(P, grp.extra["vertex_elements"], F, G)


def test_quasiregular():
    assert quasiregular_check(build_named("cuboctahedron"))
    assert quasiregular_check(build_named("icosidodecahedron"))
    assert not quasiregular_check(build_named("cube"))
    assert not quasiregular_check(build_named("rhombic_dodecahedron"))


@pytest.mark.parametrize("name", ["cuboctahedron", "rhombic_dodecahedron", "icosidodecahedron",
                                  "rhombic_triacontahedron", "edge_alt_6gon", "angle_alt_8gon"])
def test_two_orbit_audits(name):
    P = build_named(name)
    G = geometric_symmetries(P)
    aud = audit_two_orbit(P.lattice, G)
    assert aud["ok"], aud
    sec = section_regularity_audit(P.lattice, G)
    assert sec["ok"], [r for r in sec["sections"] if not r["ok"]]
    assert sec["j"] in (0, P.lattice.rank - 1)


def test_section_audit_rejects_regular_input():
    P = build_named("cube")
    with pytest.raises(ValueError):
        section_regularity_audit(P.lattice, geometric_symmetries(P))


def test_polygon_lambda_one_is_regular():
    for n in (2, 3, 4, 5, 6):
        G = geometric_symmetries(polygon_two_orbit(n, 1))
        assert G.order == 4 * n and flag_orbits(G).n_orbits == 1


def test_group_elements_are_distinct():
    G = geometric_symmetries(build_named("tetrahedron"))
    els = G.elements()
    assert len({tuple(e) for e in els}) == G.order == 24


@settings(max_examples=15, deadline=None)
@given(st.permutations(range(12)))
def test_invariance_under_vertex_relabelling(perm):
    P = build_named("cuboctahedron")
    perm = np.array(perm)
    inv = np.argsort(perm)
    V = P.vertices
    W = QArray(V.P[inv], V.Q[inv], V.r, V.D)
    facets = [[int(perm[v]) for v in f] for f in P.lattice.faces[2]]
    Q = GeoPolytope(lattice_from_vertex_facet(12, facets), W, P.gram, "relabelled")
    G = geometric_symmetries(Q)
    assert G.order == 48
    assert flag_orbits(G).n_orbits == 2
    assert str(orbit_class(Q.lattice, G)) == "2_{0,1}"


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 6), st.fractions(min_value=1, max_value=20, max_denominator=7), st.sampled_from(["edge_alternating", "angle_alternating"]))
def test_polygon_families_for_any_ratio(n, lam, variant):
    P = polygon_two_orbit(n, lam, variant)
    L = P.lattice
    G = geometric_symmetries(P)
    Gam = combinatorial_automorphisms(L)
    assert L.n_flags == 4 * n
    assert Gam.order == 4 * n
    if lam == 1:
        assert G.order == 4 * n
    else:
        assert G.order == 2 * n
        want = "2_{0}" if variant == "edge_alternating" else "2_{1}"
        assert str(orbit_class(L, G)) == want
