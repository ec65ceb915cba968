"""Finite reflection groups and the regular polytopes they generate.

Every family is given by a basis Gram matrix and simple roots chosen so
that the reflection matrices have entries in Q (A, B, D, F4, I2(3), I2(4),
I2(6)) or in Q(sqrt 5) (H3, H4, I2(5)).  Regular polytopes come from the
coset construction: rank-i faces are the cosets of the subgroup generated
by all reflections but the i-th, and faces are incident when their cosets
meet.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .exact import PHI, QArray, QNum, solve
from .geometry import GeoPolytope
from .lattice import FaceLattice

__all__ = [
    "ReflectionGroup",
    "UnsupportedFamilyError",
    "reflection_generators",
    "enumerate_group",
    "regular_polytope",
    "parse_schlafli",
    "CLASSICAL_ORDERS",
]


class UnsupportedFamilyError(ValueError):
    pass


@dataclass
class ReflectionGroup:
    family: str
    gram: QArray
    roots: QArray
    generators: list
    coxeter_matrix: np.ndarray
    _elements: list | None = field(default=None, repr=False)
    _right: np.ndarray | None = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def D(self) -> int:
        return self.gram.D or self.roots.D

    def reordered(self, order) -> "ReflectionGroup":
        order = list(order)
        roots = QArray(self.roots.P[order], self.roots.Q[order], self.roots.r, self.roots.D)
        return ReflectionGroup(
            self.family,
            self.gram,
            roots,
            [self.generators[i] for i in order],
            self.coxeter_matrix[np.ix_(order, order)],
        )


def _split(family: str):
    m = re.fullmatch(r"I2\((\d+)\)", family)
    if m:
        return "I2", int(m.group(1))
    m = re.fullmatch(r"([ABDFH])(\d+)", family)
    if not m:
        raise UnsupportedFamilyError(f"unsupported family {family!r}")
    return m.group(1), int(m.group(2))


def _fact(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _classical_order(family: str) -> int:
    kind, n = _split(family)
    if kind == "A":
        return _fact(n + 1)
    if kind == "B":
        return 2**n * _fact(n)
    if kind == "D":
        return 2 ** (n - 1) * _fact(n)
    if kind == "I2":
        return 2 * n
    return {"F4": 1152, "H3": 120, "H4": 14400}[family]


CLASSICAL_ORDERS = {f: _classical_order(f) for f in ["A2", "A3", "A4", "B2", "B3", "B4", "D4", "F4", "H3", "H4"]}


def _root_basis_gram(n: int, bonds: dict, D: int) -> QArray:
    """Gram matrix of unit simple roots: -cos(pi/m) off the diagonal."""
    cos = {3: QNum(Fraction(1, 2), 0, D), 5: PHI / 2 if D == 5 else None}
    rows = [[QNum(1, 0, D) if i == j else QNum(0, 0, D) for j in range(n)] for i in range(n)]
    for (i, j), m in bonds.items():
        c = cos.get(m)
        if c is None:
            raise UnsupportedFamilyError(f"bond {m} needs another basis")
        rows[i][j] = rows[j][i] = -c
    return QArray.from_entries(rows, D)


def _family_data(family: str):
    kind, n = _split(family)
    if kind == "A" and n >= 1:
        bonds = {(i, i + 1): 3 for i in range(n - 1)}
        return _root_basis_gram(n, bonds, 0), QArray.identity(n), bonds
    if kind == "D" and n >= 4:
        bonds = {(i, i + 1): 3 for i in range(n - 2)}
        bonds[(n - 3, n - 1)] = 3
        return _root_basis_gram(n, bonds, 0), QArray.identity(n), bonds
    if kind == "H" and n in (3, 4):
        bonds = {(i, i + 1): 3 for i in range(n - 2)}
        bonds[(n - 2, n - 1)] = 5
        return _root_basis_gram(n, bonds, 5), QArray.identity(n, 5), bonds
    if kind == "B" and n >= 2:
        rows = []
        for i in range(n - 1):
            r = [0] * n
            r[i], r[i + 1] = 1, -1
            rows.append(r)
        rows.append([0] * (n - 1) + [1])
        bonds = {(i, i + 1): 3 for i in range(n - 2)}
        bonds[(n - 2, n - 1)] = 4
        return QArray.identity(n), QArray.from_entries(rows), bonds
    if family == "F4":
        h = Fraction(1, 2)
        rows = [[0, 1, -1, 0], [0, 0, 1, -1], [0, 0, 0, 1], [h, -h, -h, -h]]
        return QArray.identity(4), QArray.from_entries(rows), {(0, 1): 3, (1, 2): 4, (2, 3): 3}
    if kind == "I2":
        m = n
        if m == 3:
            return _root_basis_gram(2, {(0, 1): 3}, 0), QArray.identity(2), {(0, 1): 3}
        if m == 5:
            return _root_basis_gram(2, {(0, 1): 5}, 5), QArray.identity(2, 5), {(0, 1): 5}
        if m == 4:
            return QArray.identity(2), QArray.from_entries([[1, -1], [0, 1]]), {(0, 1): 4}
        if m == 6:
            # hexagonal basis: basis vectors at 60 degrees keep cos(pi/6) implicit
            h = Fraction(1, 2)
            return QArray.from_entries([[1, h], [h, 1]]), QArray.from_entries([[1, 0], [-2, 1]]), {(0, 1): 6}
    raise UnsupportedFamilyError(f"unsupported family {family!r}")


def _reflection(alpha: QArray, gram: QArray) -> QArray:
    """Matrix of x -> x - 2<x,a>/<a,a> a on column coordinate vectors."""
    n = alpha.shape[0]
    col = QArray(alpha.P.reshape(n, 1), alpha.Q.reshape(n, 1), alpha.r, alpha.D)
    row = col.T @ gram
    norm = (row @ col)[0, 0]
    outer = (col @ row).scale(QNum(-2, 0, norm.D) / norm)
    return QArray.identity(n, gram.D or alpha.D) + outer


def reflection_generators(family: str) -> ReflectionGroup:
    """Simple reflections of a supported finite Coxeter family."""
    gram, roots, bonds = _family_data(family)
    n = roots.shape[0]
    D = gram.D or roots.D
    if roots.D != D:
        roots = QArray(roots.P, roots.Q, roots.r, D)
    gens = [_reflection(roots[i], gram) for i in range(n)]
    cm = np.full((n, n), 2, dtype=np.int64)
    np.fill_diagonal(cm, 1)
    for (i, j), m in bonds.items():
        cm[i, j] = cm[j, i] = m
    return ReflectionGroup(family, gram, roots, gens, cm)


def enumerate_group(g: ReflectionGroup) -> list:
    """All elements as exact matrices, breadth first from the identity.

    Also records the right-multiplication table ``g._right[k, i]`` = index
    of ``elements[k] @ generators[i]``.
    """
    if g._elements is not None:
        return g._elements
    ident = QArray.identity(g.rank, g.D)
    elements = [ident]
    index = {ident.key(): 0}
    right = []
    k = 0
    while k < len(elements):
        row = []
        x = elements[k]
        for s in g.generators:
            y = x @ s
            key = y.key()
            j = index.get(key)
            if j is None:
                j = len(elements)
                index[key] = j
                elements.append(y)
            row.append(j)
        right.append(row)
        k += 1
    g._elements = elements
    g._right = np.array(right, dtype=np.int64)
    return elements


_SYMBOL_FAMILY = {
    (3, 3): ("A3", False),
    (3, 4): ("B3", False),
    (4, 3): ("B3", True),
    (3, 5): ("H3", False),
    (5, 3): ("H3", True),
    (3, 3, 3): ("A4", False),
    (3, 3, 4): ("B4", False),
    (4, 3, 3): ("B4", True),
    (3, 4, 3): ("F4", False),
    (3, 3, 5): ("H4", False),
    (5, 3, 3): ("H4", True),
}


def parse_schlafli(symbol) -> tuple:
    if isinstance(symbol, str):
        return tuple(int(x) for x in re.findall(r"\d+", symbol))
    return tuple(int(x) for x in symbol)


def group_for_symbol(symbol) -> ReflectionGroup:
    """Reflection group with generators ordered along the Schläfli symbol."""
    sym = parse_schlafli(symbol)
    if len(sym) == 1:
        if sym[0] not in (3, 4, 5, 6):
            raise UnsupportedFamilyError(f"unsupported symbol {{{sym[0]}}}")
        return reflection_generators(f"I2({sym[0]})")
    if sym not in _SYMBOL_FAMILY:
        raise UnsupportedFamilyError(f"unsupported symbol {{{','.join(map(str, sym))}}}")
    family, rev = _SYMBOL_FAMILY[sym]
    g = reflection_generators(family)
    if rev:
        g = g.reordered(range(g.rank - 1, -1, -1))
    labels = tuple(int(g.coxeter_matrix[i, i + 1]) for i in range(g.rank - 1))
    assert labels == sym, (labels, sym)
    return g


def _cosets(right: np.ndarray, keep) -> np.ndarray:
    n = len(right)
    src = np.repeat(np.arange(n), len(keep))
    dst = right[:, keep].ravel()
    graph = coo_matrix((np.ones(len(src)), (src, dst)), shape=(n, n))
    return connected_components(graph, directed=False)[1]


def wythoff_base_point(g: ReflectionGroup) -> QArray:
    """Point on every mirror except the first, at scalar product 1 with its root."""
    n = g.rank
    A = g.roots @ g.gram
    rhs = QArray.from_entries([1] + [0] * (n - 1), g.D)
    return solve(A, rhs)


def regular_polytope(symbol) -> GeoPolytope:
    """Regular polytope ``{p, q, ...}`` by the coset construction."""
    sym = parse_schlafli(symbol)
    g = group_for_symbol(sym)
    elements = enumerate_group(g)
    d = g.rank
    labels = [_cosets(g._right, [j for j in range(d) if j != i]) for i in range(d)]
    vert = labels[0]
    levels = []
    for i in range(d):
        pairs = np.unique(np.stack([labels[i], vert], axis=1), axis=0)
        sets = {}
        for f, v in pairs:
            sets.setdefault(int(f), []).append(int(v))
        levels.append([tuple(sorted(vs)) for vs in sets.values()])
    lattice = FaceLattice.from_face_sets(d, levels)
    base = wythoff_base_point(g)
    n_vert = int(vert.max()) + 1
    _, first = np.unique(vert, return_index=True)
    rows = [(elements[int(k)] @ base).entries() for k in first]
    coords = QArray.from_entries(rows, g.D)
    name = "{" + ",".join(map(str, sym)) + "}"
    P = GeoPolytope(lattice, coords, g.gram, name, f"coset:{g.family}")
    P.extra["group"] = g
    P.extra["coset_labels"] = labels
    assert coords.shape[0] == n_vert
    return P
