"""Convex polytopes with exact coordinates: polar duality and rectification."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .exact import QArray, QNum, rank as exact_rank, solve
from .lattice import FaceLattice, dual_lattice, lattice_from_vertex_facet

__all__ = [
    "GeoPolytope",
    "DegenerateError",
    "centered",
    "facet_poles",
    "polar_dual",
    "rectify",
    "supporting_facets",
    "hull_from_points",
]


class DegenerateError(ValueError):
    """Vertices fail to span the ambient space, or the origin is not interior."""


@dataclass
class GeoPolytope:
    """A convex polytope: face lattice plus exact vertex coordinates.

    ``vertices[i]`` is the coordinate row of rank-0 face ``i``.  Coordinates
    live in a basis with Gram matrix ``gram``, so the scalar product is
    ``u @ gram @ v``; non-orthonormal bases keep coordinates rational or in
    Q(sqrt 5) where a Cartesian frame would need further radicals.
    """

    lattice: FaceLattice
    vertices: QArray
    gram: QArray
    name: str = ""
    provenance: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def D(self) -> int:
        return self.vertices.D or self.gram.D

    def centroid(self) -> QArray:
        n = self.vertices.shape[0]
        s = self.vertices.sum(axis=0)
        return s.scale(QNum(1, 0, self.D) / n) if self.D else s.scale(QNum(1) / n)

    def vertex_gram(self) -> QArray:
        """Matrix of scalar products between all (uncentred) vertices."""
        return self.vertices @ self.gram @ self.vertices.T

    def cartesian(self) -> np.ndarray:
        """Float coordinates in an orthonormal frame; display use only."""
        L = np.linalg.cholesky(self.gram.to_float())
        return self.vertices.to_float() @ L

    def affine_rank(self) -> int:
        c = centered(self).vertices
        return exact_rank(c)


def _field_one(D: int) -> QNum:
    return QNum(1, 0, D)


def centered(P: GeoPolytope) -> GeoPolytope:
    """Translate so the vertex centroid is the origin."""
    c = P.centroid()
    n = P.vertices.shape[0]
    shift = QArray(np.tile(c.P, (n, 1)), np.tile(c.Q, (n, 1)), c.r, c.D)
    return GeoPolytope(P.lattice, P.vertices - shift, P.gram, P.name, P.provenance, dict(P.extra))


def facet_poles(P: GeoPolytope) -> QArray:
    """Poles ``y_F`` with ``<x, y_F> = 1`` on every vertex ``x`` of facet ``F``.

    Requires the origin strictly inside ``P``.
    """
    L = P.lattice
    top = L.rank - 1
    V, G = P.vertices, P.gram
    D = P.D
    ones = [_field_one(D)]
    VG = V @ G
    poles = []
    for verts in L.faces[top]:
        idx = list(verts)
        A = VG[idx]
        AtA = A.T @ A
        rhs = A.T @ QArray.from_entries(ones * len(idx), D)
        try:
            y = solve(AtA, rhs)
        except np.linalg.LinAlgError:
            raise DegenerateError("facet hyperplane passes through the origin") from None
        vals = A @ y
        if not np.all((vals.P == vals.r) & (vals.Q == 0)):
            raise DegenerateError("facet vertices are not coplanar off the origin")
        poles.append(y)
    Y = QArray.from_entries([y.entries() for y in poles], D)
    # strict interiority: every vertex lies on the inner side of each facet
    S = VG @ Y.T
    excess = QArray(S.P - S.r, S.Q, S.r, S.D).signs()
    if np.any(excess > 0):
        raise DegenerateError("origin is not interior")
    return Y


def polar_dual(P: GeoPolytope, center: bool = True) -> GeoPolytope:
    """Polar reciprocal ``{x : <x, y> <= 1 for all y in P}``.

    The polytope is first centred on its vertex centroid.  Dual vertex ``i``
    is the pole of facet ``i`` of ``P``.
    """
    Q = centered(P) if center else P
    Y = facet_poles(Q)
    name = f"dual({P.name})" if P.name else ""
    return GeoPolytope(dual_lattice(Q.lattice), Y, Q.gram, name, "polar_dual")


def rectify(P: GeoPolytope) -> GeoPolytope:
    """Convex hull of the edge midpoints.

    Vertex ``e`` of the result is the midpoint of edge ``e`` of ``P``.  A
    rank-k face is either the rectified copy of a k-face ``F`` (k >= 2;
    vertices: edges inside ``F``) or a pair ``(v, G)`` with ``G`` a
    (k+1)-face through vertex ``v`` (vertices: edges through ``v`` inside
    ``G``).
    """
    L = P.lattice
    d = L.rank
    if d < 2:
        raise ValueError("rectification needs edges (rank >= 2)")
    edges = L.faces[1]
    V = P.vertices
    D = P.D
    half = QNum(1, 0, D) / 2 if D else QNum(1) / 2
    a = QArray(V.P[[e[0] for e in edges]], V.Q[[e[0] for e in edges]], V.r, V.D)
    b = QArray(V.P[[e[1] for e in edges]], V.Q[[e[1] for e in edges]], V.r, V.D)
    mids = (a + b).scale(half)

    edges_below = {}

    def edges_in(r, i):
        if r == d:
            return set(range(len(edges)))
        if r == 1:
            return {i}
        key = (r, i)
        if key not in edges_below:
            edges_below[key] = L.faces_below(r, i)[1]
        return edges_below[key]

    vertex_edges = [set(L.up_of(0, v)) for v in range(L.n_vertices)]
    levels = [[(e,) for e in range(len(edges))]]
    for k in range(1, d):
        level = set()
        if k >= 2:
            for i in range(len(L.faces[k])):
                level.add(tuple(sorted(edges_in(k, i))))
        gs = range(len(L.faces[k + 1])) if k + 1 < d else [0]
        for g in gs:
            inside = edges_in(k + 1, g)
            verts = L.faces[k + 1][g] if k + 1 < d else range(L.n_vertices)
            for v in verts:
                level.add(tuple(sorted(vertex_edges[v] & inside)))
        levels.append(sorted(level))
    lat = FaceLattice.from_face_sets(d, levels)
    name = f"rectified({P.name})" if P.name else ""
    return GeoPolytope(lat, mids, P.gram, name, "rectify")


def supporting_facets(V: QArray, gram: QArray) -> list:
    """Facet vertex sets of the hull of ``V`` by trying every d-subset.

    Exponential in the dimension; meant for small inputs and as an
    independent check of constructed face lattices.  ``V`` must be centred
    with the origin strictly inside the hull.
    """
    n, d = V.shape
    VG = V @ gram
    D = V.D or gram.D
    one = QArray.from_entries([QNum(1, 0, D)] * d, D)
    found = set()
    for sub in combinations(range(n), d):
        A = VG[list(sub)]
        try:
            y = solve(A, one)
        except np.linalg.LinAlgError:
            continue
        vals = VG @ y
        excess = QArray(vals.P - vals.r, vals.Q, vals.r, vals.D).signs()
        if np.any(excess > 0):
            continue
        found.add(tuple(int(i) for i in np.flatnonzero(excess == 0)))
    return sorted(found)


def hull_from_points(V: QArray, gram: QArray, name: str = "") -> GeoPolytope:
    """Convex hull of a small vertex set, lattice from brute-force facets."""
    P = GeoPolytope(None, V, gram, name, "hull")
    Q = centered(P)
    facets = supporting_facets(Q.vertices, gram)
    P.lattice = lattice_from_vertex_facet(V.shape[0], facets)
    return P
