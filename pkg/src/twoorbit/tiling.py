"""Periodic tilings, their torus quotients and quotient symmetry groups.

A tiling is stored by its translation lattice (a basis with rational Gram
matrix) and one representative per translation class of faces.  A vertex
reference is a pair ``(vertex class, integer offset)``; coordinates are
fractional coordinates in the lattice basis, so every symmetry acts as
``x -> M x + t`` with ``M`` an integer matrix preserving the Gram matrix.

Flag orbits of the infinite tiling are read off the finite quotient by the
sublattice ``k * Z^d``: translations lie inside the group, so every orbit
is a union of translation classes and the counts do not depend on ``k``
once ``k >= 3``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

import numpy as np

from .exact import QArray, QNum, inverse, rank as exact_rank
from .geometry import GeoPolytope, facet_poles, centered
from .lattice import FaceLattice
from .symmetry import (
    PermGroup,
    face_orbit_counts,
    flag_orbits,
    orbit_class,
)

__all__ = [
    "PeriodicComplex",
    "TorusQuotient",
    "build_tiling",
    "tiling_from_tiles",
    "dual_tiling",
    "torus_quotient",
    "quotient_symmetries",
    "tiling_orbit_report",
    "lattice_automorphisms",
    "dihedral_angle_cos",
    "dihedral_angle_cosines",
    "turn_fraction",
    "TILING_NAMES",
]

Ref = tuple  # (vertex class, offset tuple)


def _frac_vec(p) -> tuple:
    return tuple(Fraction(x) for x in p)


def _floor_vec(p) -> tuple:
    return tuple(math.floor(x) for x in p)


def _shift(face, z) -> frozenset:
    return frozenset((c, tuple(o + dz for o, dz in zip(off, z))) for c, off in face)


def _canonical(face) -> tuple:
    """Translate a face so its least reference has offset zero."""
    c0, o0 = min(face, key=lambda ref: (ref[1], ref[0]))
    return tuple(sorted((c, tuple(a - b for a, b in zip(o, o0))) for c, o in face))


@dataclass
class PeriodicComplex:
    """One translation class per face of a periodic face-to-face tiling.

    ``cells[r]`` lists canonical faces of dimension ``r`` (``r = d`` are
    the tiles), each a sorted tuple of vertex references.
    """

    name: str
    d: int
    gram: list
    positions: list
    cells: list
    params: dict = field(default_factory=dict)

    @property
    def counts(self) -> tuple:
        return tuple(len(c) for c in self.cells)

    @property
    def gram_qarray(self) -> QArray:
        return QArray.from_entries(self.gram)

    def point(self, ref) -> tuple:
        c, off = ref
        return tuple(p + o for p, o in zip(self.positions[c], off))

    def centroid(self, face) -> tuple:
        pts = [self.point(r) for r in face]
        n = len(pts)
        return tuple(sum(col, Fraction(0)) / n for col in zip(*pts))

    @cached_property
    def flags_per_cell(self) -> int:
        q = torus_quotient(self, 3)
        return q.lattice.n_flags // 3**self.d


# -- construction --------------------------------------------------------

def _affine_dim(points) -> int:
    if len(points) <= 1:
        return 0
    p0 = points[0]
    rows = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return exact_rank(QArray.from_entries(rows))


def tiling_from_tiles(name: str, gram, tiles, params=None) -> PeriodicComplex:
    """Build a periodic complex from tiles given as lists of points.

    Points are fractional coordinates in the lattice basis.  Lower faces
    are recovered as intersections of a tile with its neighbours and
    closed under intersection; every face of a face-to-face tiling is the
    intersection of the tiles containing it.
    """
    gram = [[Fraction(x) for x in row] for row in gram]
    d = len(gram)
    pts = [[_frac_vec(p) for p in t] for t in tiles]
    fracs = sorted({tuple(x - math.floor(x) for x in p) for t in pts for p in t})
    cls = {f: i for i, f in enumerate(fracs)}

    def ref(p):
        fl = _floor_vec(p)
        return (cls[tuple(x - f for x, f in zip(p, fl))], fl)

    tile_refs = [frozenset(ref(p) for p in t) for t in pts]
    positions = [tuple(f) for f in fracs]
    box = list(product(range(-3, 4), repeat=d))
    instances = [_shift(t, z) for t in tile_refs for z in box]

    def dim(face):
        return _affine_dim([tuple(p + o for p, o in zip(positions[c], off)) for c, off in face])

    classes = [set() for _ in range(d + 1)]
    for t in tile_refs:
        classes[d].add(_canonical(t))
        faces = {t & u for u in instances if u != t and t & u}
        frontier = set(faces)
        while frontier:
            new = {a & b for a in frontier for b in faces if a & b} - faces
            faces |= new
            frontier = new
        for f in faces:
            r = dim(f)
            if r >= d:
                raise ValueError(f"{name}: tiles overlap in a full-dimensional set")
            classes[r].add(_canonical(f))
    cells = [sorted(c) for c in classes]
    return PeriodicComplex(name, d, gram, positions, cells, dict(params or {}))


def dual_tiling(T: PeriodicComplex, name: str | None = None) -> PeriodicComplex:
    """Tiles of the dual are the centroids of the tiles around each vertex."""
    tiles = []
    for v in range(len(T.positions)):
        around = []
        for B in T.cells[T.d]:
            for c, off in B:
                if c == v:
                    inst = [(cc, tuple(a - b for a, b in zip(oo, off))) for cc, oo in B]
                    around.append(T.centroid(inst))
        tiles.append(around)
    return tiling_from_tiles(name or f"dual({T.name})", T.gram, tiles, {"dual_of": T.name})


def _ratio(x) -> Fraction:
    x = Fraction(x)
    if x <= 0:
        raise ValueError("ratio must be positive")
    return x


def _cubic_to_fcc(p):
    x, y, z = (Fraction(v) for v in p)
    return ((x + y - z) / 2, (x - y + z) / 2, (-x + y + z) / 2)


_HEX = [[1, Fraction(1, 2)], [Fraction(1, 2), 1]]


def _apeirogon_alt(a=1, b=2):
    a, b = _ratio(a), _ratio(b)
    s = a / (a + b)
    return tiling_from_tiles("apeirogon_alt", [[(a + b) ** 2]], [[(0,), (s,)], [(s,), (1,)]], {"a": a, "b": b})


def _square():
    return tiling_from_tiles("square", [[1, 0], [0, 1]], [[(0, 0), (1, 0), (1, 1), (0, 1)]])


def _triangular():
    return tiling_from_tiles("triangular", _HEX, [[(0, 0), (1, 0), (0, 1)], [(1, 0), (1, 1), (0, 1)]])


def _rhombus(ratio=2):
    # diagonals e1+e2 and e1-e2 have lengths in proportion ``ratio``
    r2 = _ratio(ratio) ** 2
    g = [[(r2 + 1) / 4, (r2 - 1) / 4], [(r2 - 1) / 4, (r2 + 1) / 4]]
    return tiling_from_tiles("rhombus", g, [[(0, 0), (1, 0), (1, 1), (0, 1)]], {"ratio": ratio})


def _rectangle(ratio=2):
    r = _ratio(ratio)
    return tiling_from_tiles("rectangle", [[1, 0], [0, r * r]], [[(0, 0), (1, 0), (1, 1), (0, 1)]], {"ratio": ratio})


def _rhombus_strip(ratio=2):
    # unit rhombi with a horizontal side; consecutive strips are mirror images
    r2 = _ratio(ratio) ** 2
    c = (r2 - 1) / (r2 + 1)
    g = [[1, 0], [0, 4 * (1 - c * c)]]
    h = Fraction(1, 2)
    t1 = [(0, 0), (1, 0), (1 + c, h), (c, h)]
    t2 = [(c, h), (1 + c, h), (1, 1), (0, 1)]
    return tiling_from_tiles("rhombus_strip", g, [t1, t2], {"ratio": ratio})


def _trihexagonal():
    h = Fraction(1, 2)
    A, B, C = (h, 0), (0, h), (h, h)
    up = [A, B, C]
    down = [C, (1, h), (h, 1)]
    hexagon = [A, B, (-h, h), (-h, 0), (0, -h), (h, -h)]
    return tiling_from_tiles("trihexagonal", _HEX, [up, down, hexagon])


def _cubic():
    return tiling_from_tiles("cubic", [[1, 0, 0], [0, 1, 0], [0, 0, 1]], [list(product((0, 1), repeat=3))])


def _tet_oct():
    tp = [(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)]
    tm = [(2, 0, 0), (1, 1, 0), (1, 0, 1), (2, 1, 1)]
    octa = [(0, 0, 0), (2, 0, 0), (1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1)]
    g = [[2, 1, 1], [1, 2, 1], [1, 1, 2]]
    tiles = [[_cubic_to_fcc(p) for p in t] for t in (tp, tm, octa)]
    return tiling_from_tiles("tet_oct", g, tiles)


_BUILDERS = {
    "apeirogon_alt": _apeirogon_alt,
    "square": _square,
    "triangular": _triangular,
    "hexagonal": lambda: dual_tiling(_triangular(), "hexagonal"),
    "rhombus": _rhombus,
    "rhombus_strip": _rhombus_strip,
    "rectangle": _rectangle,
    "trihexagonal": _trihexagonal,
    "rhombille": lambda: dual_tiling(_trihexagonal(), "rhombille"),
    "cubic": _cubic,
    "tet_oct": _tet_oct,
    "rhombic_dodec": lambda: dual_tiling(_tet_oct(), "rhombic_dodec"),
}

TILING_NAMES = tuple(_BUILDERS)


def build_tiling(name: str, *args, **params) -> PeriodicComplex:
    if name not in _BUILDERS:
        raise KeyError(f"unknown tiling {name!r}")
    return _BUILDERS[name](*args, **params)


# -- torus quotient ----------------------------------------------------------

@dataclass
class TorusQuotient:
    """Finite quotient of a periodic complex by ``k * Z^d``."""

    complex: PeriodicComplex
    k: int
    lattice: FaceLattice
    face_class: list
    face_shift: list
    scale: int
    vertex_pos: np.ndarray
    centroids: list

    @property
    def d(self) -> int:
        return self.complex.d

    @cached_property
    def group(self) -> PermGroup:
        return quotient_symmetries(self)

    def to_dict(self) -> dict:
        out = self.lattice.to_dict()
        out["periodic"] = {
            "name": self.complex.name,
            "d": self.d,
            "k": self.k,
            "gram": [[str(x) for x in row] for row in self.complex.gram],
        }
        return out


def _lcm_den(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out


def torus_quotient(T: PeriodicComplex, k: int = 3) -> TorusQuotient:
    if k < 3:
        raise ValueError("quotient scale k must be at least 3")
    d = T.d
    shifts = list(product(range(k), repeat=d))
    sidx = {s: i for i, s in enumerate(shifts)}
    nshift = len(shifts)

    def mod(o):
        return tuple(x % k for x in o)

    def vid(c, o):
        return c * nshift + sidx[mod(o)]

    faces, face_class, face_shift, cents = [], [], [], []
    for r in range(d + 1):
        fr, fc, fs, ce = [], [], [], []
        for a, A in enumerate(T.cells[r]):
            cen = T.centroid(A)
            for s in shifts:
                fr.append(tuple(sorted({vid(c, tuple(x + y for x, y in zip(o, s))) for c, o in A})))
                fc.append(a)
                fs.append(s)
                ce.append(tuple(x + y for x, y in zip(cen, s)))
        faces.append(fr)
        face_class.append(fc)
        face_shift.append(fs)
        cents.append(ce)

    up = []
    for r in range(d):
        lookup = {(fc, fs): i for i, (fc, fs) in enumerate(zip(face_class[r + 1], face_shift[r + 1]))}
        rows = []
        incl = {}
        for a, A in enumerate(T.cells[r]):
            Aset = frozenset(A)
            c0, o0 = A[0]
            for b, B in enumerate(T.cells[r + 1]):
                Bset = frozenset(B)
                us = set()
                for c, o in B:
                    if c == c0:
                        u = tuple(x - y for x, y in zip(o, o0))
                        if _shift(Aset, u) <= Bset:
                            us.add(u)
                incl[(a, b)] = us
        for a, s in zip(face_class[r], face_shift[r]):
            ups = set()
            for b in range(len(T.cells[r + 1])):
                for u in incl[(a, b)]:
                    ups.add(lookup[(b, mod(tuple(x - y for x, y in zip(s, u))))])
            rows.append(sorted(ups))
        up.append(rows)

    vertex_pts = [T.point((c, s)) for c in range(len(T.positions)) for s in shifts]
    allvals = [x for p in vertex_pts for x in p] + [x for ce in cents for p in ce for x in p]
    N = _lcm_den(allvals)
    vpos = np.array([[int(x * N) for x in p] for p in vertex_pts], dtype=np.int64)
    cpos = [np.array([[int(x * N) for x in p] for p in ce], dtype=np.int64).reshape(-1, d) for ce in cents]
    L = FaceLattice(d + 1, faces, up)
    return TorusQuotient(T, k, L, face_class, face_shift, N, vpos, cpos)


# -- symmetries ------------------------------------------------------------------

def _isqrt_floor(x: Fraction) -> int:
    x = Fraction(x)
    n = math.isqrt(x.numerator // x.denominator)
    while Fraction((n + 1) ** 2) <= x:
        n += 1
    return n


def lattice_automorphisms(gram) -> list:
    """Integer matrices ``M`` with ``M^T G M = G`` (columns by backtracking)."""
    G = [[Fraction(x) for x in row] for row in gram]
    d = len(G)
    Gi = [[Fraction(str(x)) for x in row] for row in inverse(QArray.from_entries(G)).entries()]

    def ip(u, v):
        return sum(u[i] * G[i][j] * v[j] for i in range(d) for j in range(d))

    cands = []
    for j in range(d):
        bound = [_isqrt_floor(G[j][j] * Gi[i][i]) for i in range(d)]
        vecs = [v for v in product(*[range(-b, b + 1) for b in bound]) if ip(v, v) == G[j][j]]
        cands.append(vecs)
    out = []

    def rec(cols):
        j = len(cols)
        if j == d:
            out.append(np.array(cols, dtype=np.int64).T)
            return
        for v in cands[j]:
            if all(ip(cols[i], v) == G[i][j] for i in range(j)):
                rec(cols + [v])

    rec([])
    return out


def _codes(X: np.ndarray, mod: int) -> np.ndarray:
    out = np.zeros(len(X), dtype=np.int64)
    for j in range(X.shape[1]):
        out = out * mod + X[:, j]
    return out


def _padded(faces) -> np.ndarray:
    m = max(len(f) for f in faces)
    out = np.full((len(faces), m), -1, dtype=np.int64)
    for i, f in enumerate(faces):
        out[i, : len(f)] = f
    return out


def quotient_symmetries(Q, k: int | None = None) -> PermGroup:
    """Full symmetry group of the quotient complex.

    ``Q`` is a :class:`TorusQuotient`, or a :class:`PeriodicComplex` that is
    first divided by ``k Z^d`` (``k`` defaults to 3).

    Candidates are pairs (M, t): M a lattice automorphism, t fixed by the
    image of the first vertex.  A candidate is kept when it maps vertices to
    vertices, face centroids to face centroids of the same rank, and each
    face's vertex set onto the vertex set of its image.  The order is the
    number of kept pairs.
    """
    if isinstance(Q, PeriodicComplex):
        Q = torus_quotient(Q, 3 if k is None else k)
    elif k is not None and k != Q.k:
        raise ValueError(f"quotient was built with k = {Q.k}, not {k}")
    L = Q.lattice
    d, k, N = Q.d, Q.k, Q.scale
    modulus = N * k
    vkey = _codes(Q.vertex_pos % modulus, modulus)
    vorder = np.argsort(vkey)
    vsorted = vkey[vorder]
    ckeys = []
    for r in range(d + 1):
        ck = _codes(Q.centroids[r] % modulus, modulus)
        o = np.argsort(ck)
        ckeys.append((ck[o], o))
    pads = [_padded(L.faces[r]) for r in range(d + 1)]
    pads_sorted = [np.sort(np.where(p < 0, np.iinfo(np.int64).max, p), axis=1) for p in pads]

    def lookup(sorted_keys, order, keys):
        pos = np.minimum(np.searchsorted(sorted_keys, keys), len(sorted_keys) - 1)
        if not np.array_equal(sorted_keys[pos], keys):
            return None
        return order[pos]

    elements = []
    gens = []
    first_per_M = []
    x0 = Q.vertex_pos[0]
    for M in lattice_automorphisms(Q.complex.gram):
        found = False
        for w in range(len(Q.vertex_pos)):
            t = Q.vertex_pos[w] - M @ x0
            vimg = lookup(vsorted, vorder, _codes((Q.vertex_pos @ M.T + t) % modulus, modulus))
            if vimg is None:
                continue
            fperms = [vimg]
            ok = True
            for r in range(1, d + 1):
                sk, so = ckeys[r]
                img = lookup(sk, so, _codes((Q.centroids[r] @ M.T + t) % modulus, modulus))
                if img is None:
                    ok = False
                    break
                p = pads[r]
                mapped = np.where(p < 0, np.iinfo(np.int64).max, vimg[np.maximum(p, 0)])
                if not np.array_equal(np.sort(mapped, axis=1), pads_sorted[r][img]):
                    ok = False
                    break
                fperms.append(img)
            if not ok:
                continue
            elements.append((M, t))
            if not found:
                first_per_M.append(fperms)
                found = True
    ident = np.eye(d, dtype=np.int64)
    for i in range(d):
        t = N * ident[i]
        vimg = lookup(vsorted, vorder, _codes((Q.vertex_pos + t) % modulus, modulus))
        fp = [vimg]
        for r in range(1, d + 1):
            sk, so = ckeys[r]
            fp.append(lookup(sk, so, _codes((Q.centroids[r] + t) % modulus, modulus)))
        gens.append(L.flag_perm_from_face_perms(fp))
    for fp in first_per_M:
        gens.append(L.flag_perm_from_face_perms(fp))
    G = PermGroup(L, gens, len(elements), "quotient")
    G.extra["point_group_order"] = len(first_per_M)
    G.extra["elements"] = elements
    return G


def tiling_orbit_report(T: PeriodicComplex, k: int = 3) -> dict:
    Q = torus_quotient(T, k)
    G = Q.group
    part = flag_orbits(G)
    cls = orbit_class(Q.lattice, G)
    return {
        "name": T.name,
        "d": T.d,
        "k": k,
        "flags": Q.lattice.n_flags,
        "flags_per_cell": Q.lattice.n_flags // k**T.d,
        "order": G.order,
        "point_group": G.extra["point_group_order"],
        "orbits": part.n_orbits,
        "transitivity": face_orbit_counts(G),
        "class": str(cls),
        "free": bool(np.all(part.sizes == G.order)),
    }


# -- dihedral angles ------------------------------------------------------------

def dihedral_angle_cos(P: GeoPolytope, ridge: int = 0, poles: QArray | None = None) -> QNum:
    """Exact cosine of the interior dihedral angle at edge ``ridge`` of a 3-polytope.

    ``poles`` may pass in precomputed facet poles of the centred polytope.
    """
    L = P.lattice
    if L.rank != 3:
        raise ValueError("dihedral angles are computed for 3-polytopes")
    facets = L.faces_above(1, ridge)[2]
    if len(facets) != 2:
        raise ValueError("edge does not lie in exactly two facets")
    Y = poles if poles is not None else facet_poles(centered(P))
    G = P.gram
    f1, f2 = sorted(facets)
    y1, y2 = Y[f1], Y[f2]

    def ip(u, v):
        n = u.shape[0]
        return (QArray(u.P.reshape(1, n), u.Q.reshape(1, n), u.r, u.D) @ G @ QArray(v.P.reshape(n, 1), v.Q.reshape(n, 1), v.r, v.D))[0, 0]

    denom = (ip(y1, y1) * ip(y2, y2)).sqrt()
    return -ip(y1, y2) / denom


def dihedral_angle_cosines(P: GeoPolytope) -> list:
    """Cosine of the dihedral angle at every edge, in edge order."""
    Y = facet_poles(centered(P))
    return [dihedral_angle_cos(P, e, Y) for e in range(len(P.lattice.faces[1]))]


def _chebyshev(c: QNum, n: int) -> list:
    out = [QNum(1, 0, c.D), c]
    while len(out) <= n:
        out.append(2 * c * out[-1] - out[-2])
    return out


def turn_fraction(c: QNum, max_n: int = 100) -> dict:
    """Write the angle with cosine ``c`` as ``2*pi*j/N`` exactly, if possible.

    ``N`` is the least positive integer with ``cos(N theta) = 1``.  The
    numerator ``j`` is recovered from which multiple of the angle comes
    closest to a full turn, using exact comparisons only.  The angle fits a
    whole number of times around a full turn iff ``j == 1``.
    """
    T = _chebyshev(c, max_n)
    one = QNum(1, 0, c.D)
    N = next((n for n in range(1, max_n + 1) if T[n] == one), None)
    if N is None:
        return {"cos": c, "N": None, "j": None, "copies": None, "integral": False}
    # i with i*j = +-1 mod N maximises cos(i theta) over 0 < i < N
    best = max(range(1, N), key=lambda i: T[i]) if N > 1 else 1
    inv = pow(best, -1, N) if N > 1 else 1
    j = min(inv, N - inv) if N > 1 else 0
    copies = Fraction(N, j) if j else None
    return {"cos": c, "N": N, "j": j, "copies": copies, "integral": j == 1}
