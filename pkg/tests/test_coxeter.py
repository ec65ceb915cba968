from __future__ import annotations

import numpy as np
import pytest

from twoorbit import QArray, enumerate_group, reflection_generators, regular_polytope, verify_axioms
from twoorbit.coxeter import UnsupportedFamilyError, group_for_symbol, parse_schlafli, wythoff_base_point
from twoorbit.exact import inner

# textbook orders
ORDERS = {"A3": 24, "B3": 48, "H3": 120, "A4": 120, "B4": 384, "D4": 192, "F4": 1152,
          "I2(5)": 10, "I2(6)": 12}


@pytest.mark.parametrize("family", sorted(ORDERS))
def test_group_orders(family):
    g = reflection_generators(family)
    assert len(enumerate_group(g)) == ORDERS[family]


@pytest.mark.parametrize("family", sorted(ORDERS))
def test_generator_relations(family):
    g = reflection_generators(family)
    n = g.rank
    I = QArray.identity(n, g.D)
    for i in range(n):
        s = g.generators[i]
        assert s @ s == I
        assert s.T @ g.gram @ s == g.gram
        # the root is negated
        assert (g.roots[i:i + 1] @ s.T) == -g.roots[i:i + 1]
        for j in range(i + 1, n):
            m = int(g.coxeter_matrix[i, j])
            w = g.generators[i] @ g.generators[j]
            p = I
            for k in range(1, m + 1):
                p = p @ w
                assert (p == I) == (k == m)


def test_right_multiplication_table():
    g = reflection_generators("B3")
    els = enumerate_group(g)
    rng = np.random.default_rng(0)
    for k in rng.choice(len(els), 10, replace=False):
        for i in range(g.rank):
            assert els[g._right[k, i]] == els[k] @ g.generators[i]


def test_group_closed_under_products():
    els = enumerate_group(reflection_generators("A3"))
    keys = {e.key() for e in els}
    for a in els[:6]:
        for b in els:
            assert (a @ b).key() in keys


def test_unsupported_symbols():
    with pytest.raises(UnsupportedFamilyError):
        group_for_symbol("{7}")
    with pytest.raises(UnsupportedFamilyError):
        group_for_symbol("{3,6}")
    with pytest.raises(Exception):
        reflection_generators("E6")


def test_schlafli_ordering():
    for sym in ["{3,4}", "{4,3}", "{4,3,3}", "{5,3,3}", "{3,4,3}"]:
        g = group_for_symbol(sym)
        labels = tuple(int(g.coxeter_matrix[i, i + 1]) for i in range(g.rank - 1))
        assert labels == parse_schlafli(sym)


def test_base_point_lies_on_other_mirrors():
    g = group_for_symbol("{3,3,5}")
    b = wythoff_base_point(g)
    for i in range(g.rank):
        val = inner(g.roots[i], b, g.gram)
        assert val == (1 if i == 0 else 0)


F_VECTORS = {
    "{3,3}": (4, 6, 4),
    "{4,3}": (8, 12, 6),
    "{3,4}": (6, 12, 8),
    "{5,3}": (20, 30, 12),
    "{3,5}": (12, 30, 20),
    "{3,3,3}": (5, 10, 10, 5),
    "{4,3,3}": (16, 32, 24, 8),
    "{3,3,4}": (8, 24, 32, 16),
    "{3,4,3}": (24, 96, 96, 24),
    "{5}": (5, 5),
    "{6}": (6, 6),
}


@pytest.mark.parametrize("symbol", sorted(F_VECTORS))
def test_regular_polytope_f_vectors(symbol):
    P = regular_polytope(symbol)
    assert P.lattice.f_vector == F_VECTORS[symbol]
    assert verify_axioms(P.lattice).ok


@pytest.mark.parametrize("symbol", ["{4,3}", "{3,5}", "{3,4,3}"])
def test_regular_vertices_are_equidistant(symbol):
    P = regular_polytope(symbol)
    norms = {inner(P.vertices[i], P.vertices[i], P.gram) for i in range(P.vertices.shape[0])}
    assert len(norms) == 1
    # all edges equal
    L = P.lattice
    lengths = set()
    for a, b in L.faces[1]:
        diff = P.vertices[a] - P.vertices[b]
        lengths.add(inner(diff, diff, P.gram))
    assert len(lengths) == 1


def test_600_cell_f_vector():
    P = regular_polytope("{3,3,5}")
    assert P.lattice.f_vector == (120, 720, 1200, 600)
