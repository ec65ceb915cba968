"""Ranked face lattices of abstract polytopes.

A :class:`FaceLattice` of rank ``d`` stores the proper faces of ranks
``0 .. d-1``; the empty face (rank -1) and the whole polytope (rank d) are
implicit.  Each face carries its vertex set, and faces of consecutive ranks
are linked both ways.  Flags are tuples ``(f_0, ..., f_{d-1})`` of face
indices, one per rank.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "FaceLattice",
    "AxiomReport",
    "lattice_from_vertex_facet",
    "verify_axioms",
    "flags",
    "adjacent_flag",
    "dual_lattice",
    "section",
    "find_isomorphism",
    "is_isomorphic",
    "flag_colors",
]

EMPTY = -1  # rank of the implicit least face


class FaceLattice:
    """Proper faces of a rank-``d`` abstract polytope.

    Parameters
    ----------
    rank : int
        Rank ``d`` of the polytope.
    faces : list of list of tuple
        ``faces[r][i]`` is the sorted vertex-id tuple of face ``i`` of rank ``r``.
    up : list of list of list of int
        ``up[r][i]`` lists the rank ``r+1`` faces containing face ``i`` of rank
        ``r`` (for ``r = 0 .. d-2``).
    """

    def __init__(self, rank: int, faces, up):
        self.rank = int(rank)
        self.faces = [[tuple(f) for f in fs] for fs in faces]
        if len(self.faces) != self.rank:
            raise ValueError(f"expected {self.rank} ranks of faces, got {len(self.faces)}")
        self.up = [[sorted(set(u)) for u in us] for us in up]
        self.down = [[[] for _ in fs] for fs in self.faces]
        for r, us in enumerate(self.up):
            for i, u in enumerate(us):
                for j in u:
                    self.down[r + 1][j].append(i)
        for ds in self.down:
            for d in ds:
                d.sort()
        self.origin = None  # set by section(): (rank offset, ids per rank)

    # -- constructors --------------------------------------------------
    @classmethod
    def from_face_sets(cls, rank: int, faces_by_rank) -> "FaceLattice":
        """Build a lattice whose incidence is inclusion of vertex sets.

        Faces are sorted within each rank by vertex set.
        """
        faces = [sorted({tuple(sorted(f)) for f in fs}) for fs in faces_by_rank]
        up = []
        for r in range(rank - 1):
            lower = faces[r]
            containing = {}
            for j, g in enumerate(faces[r + 1]):
                for v in g:
                    containing.setdefault(v, []).append(j)
            links = []
            for f in lower:
                gs = [j for j in containing.get(f[0], []) if set(f) <= set(faces[r + 1][j])]
                links.append(gs)
            up.append(links)
        return cls(rank, faces, up)

    # -- basic queries -------------------------------------------------
    def __repr__(self):
        return f"FaceLattice(rank={self.rank}, f={self.f_vector})"

    @property
    def f_vector(self) -> tuple:
        return tuple(len(fs) for fs in self.faces)

    @property
    def n_vertices(self) -> int:
        return len(self.faces[0]) if self.rank else 0

    def up_of(self, r: int, i: int) -> list:
        """Faces of rank ``r+1`` above face ``(r, i)``; handles improper faces."""
        if r == EMPTY:
            return list(range(len(self.faces[0]))) if self.rank else [0]
        if r == self.rank - 1:
            return [0]
        return self.up[r][i]

    def down_of(self, r: int, i: int) -> list:
        if r == self.rank:
            return list(range(len(self.faces[r - 1]))) if self.rank else [0]
        if r == 0:
            return [0]
        return self.down[r][i]

    def faces_above(self, r: int, i: int) -> dict:
        """All proper faces ``> (r, i)`` as ``{rank: set(ids)}``."""
        out = {}
        cur = {i}
        for s in range(r, self.rank - 1):
            nxt = set()
            for j in cur:
                nxt.update(self.up_of(s, j))
            out[s + 1] = nxt
            cur = nxt
        return out

    def faces_below(self, r: int, i: int) -> dict:
        """All proper faces ``< (r, i)`` as ``{rank: set(ids)}``."""
        out = {}
        cur = {i}
        for s in range(r, 0, -1):
            nxt = set()
            for j in cur:
                nxt.update(self.down_of(s, j))
            out[s - 1] = nxt
            cur = nxt
        return out

    def is_below(self, F: tuple, G: tuple) -> bool:
        """``F <= G`` for faces given as ``(rank, index)``; improper allowed."""
        rf, i = F
        rg, j = G
        if rf == EMPTY or rg == self.rank:
            return True
        if rf > rg:
            return False
        if rf == rg:
            return i == j
        if rf == self.rank or rg == EMPTY:
            return False
        return j in self.faces_above(rf, i).get(rg, set())

    # -- flags ---------------------------------------------------------
    @cached_property
    def flag_array(self) -> np.ndarray:
        """All flags, lexicographically sorted, shape ``(n_flags, rank)``."""
        d = self.rank
        if d == 0:
            return np.zeros((1, 0), dtype=np.int64)
        out = []
        stack = [(v,) for v in range(len(self.faces[0]) - 1, -1, -1)]
        while stack:
            chain = stack.pop()
            r = len(chain) - 1
            if r == d - 1:
                out.append(chain)
                continue
            for g in reversed(self.up[r][chain[-1]]):
                stack.append(chain + (g,))
        return np.array(out, dtype=np.int64).reshape(-1, d)

    @property
    def n_flags(self) -> int:
        return len(self.flag_array)

    @cached_property
    def _radix(self) -> np.ndarray:
        sizes = [max(len(fs), 1) for fs in self.faces]
        rad = np.ones(self.rank, dtype=np.int64)
        for r in range(self.rank - 2, -1, -1):
            rad[r] = rad[r + 1] * sizes[r + 1]
        return rad

    @cached_property
    def _flag_codes(self):
        codes = self.flag_array @ self._radix if self.rank else np.zeros(1, dtype=np.int64)
        order = np.argsort(codes, kind="stable")
        return codes[order], order

    def flag_index(self, flag_rows) -> np.ndarray:
        """Indices of the given flags (rows of face ids); -1 where not a flag."""
        rows = np.asarray(flag_rows, dtype=np.int64).reshape(-1, self.rank)
        codes = rows @ self._radix if self.rank else np.zeros(len(rows), dtype=np.int64)
        sorted_codes, order = self._flag_codes
        pos = np.searchsorted(sorted_codes, codes)
        pos = np.minimum(pos, len(sorted_codes) - 1)
        hit = sorted_codes[pos] == codes
        return np.where(hit, order[pos], -1)

    def _other(self, flag, i: int) -> int:
        lo = self.up_of(i - 1, flag[i - 1] if i > 0 else 0)
        hi = self.down_of(i + 1, flag[i + 1] if i < self.rank - 1 else 0)
        his = set(hi)
        cands = [h for h in lo if h in his and h != flag[i]]
        if len(cands) != 1:
            raise ValueError(f"diamond condition fails at flag {tuple(flag)}, rank {i}")
        return cands[0]

    @cached_property
    def adjacency(self) -> np.ndarray:
        """``adjacency[k, i]`` is the index of the i-adjacent flag of flag ``k``."""
        F = self.flag_array
        d = self.rank
        adj = np.empty((len(F), d), dtype=np.int64)
        for i in range(d):
            others = np.array([self._other(f, i) for f in F], dtype=np.int64)
            rows = F.copy()
            rows[:, i] = others
            adj[:, i] = self.flag_index(rows)
        return adj

    @cached_property
    def flag_representatives(self) -> list:
        """``reps[r][i]``: index of the first flag through face ``(r, i)``."""
        reps = []
        F = self.flag_array
        for r in range(self.rank):
            rep = np.full(len(self.faces[r]), -1, dtype=np.int64)
            col = F[:, r]
            first = np.unique(col, return_index=True)
            rep[first[0]] = first[1]
            reps.append(rep)
        return reps

    def face_perms_from_flag_perm(self, perm: np.ndarray) -> list:
        """Face permutations per rank induced by a flag permutation."""
        F = self.flag_array
        return [F[perm[self.flag_representatives[r]], r] for r in range(self.rank)]

    def flag_perm_from_face_perms(self, face_perms) -> np.ndarray:
        """Flag permutation induced by per-rank face maps.

        Raises ``ValueError`` if the face maps do not send flags to flags.
        """
        F = self.flag_array
        img = np.stack([np.asarray(face_perms[r])[F[:, r]] for r in range(self.rank)], axis=1) if self.rank else F
        idx = self.flag_index(img)
        if np.any(idx < 0):
            raise ValueError("face maps do not preserve incidence")
        return idx

    # -- serialization -------------------------------------------------
    def to_dict(self) -> dict:
        """Deterministic JSON-ready form (faces sorted by rank, vertex set)."""
        order = [sorted(range(len(fs)), key=lambda i, fs=fs: fs[i]) for fs in self.faces]
        gid = {}
        faces = []
        for r in range(self.rank):
            for i in order[r]:
                gid[(r, i)] = len(faces)
                faces.append([r, list(self.faces[r][i])])
        inc = []
        for r in range(self.rank - 1):
            for i in order[r]:
                for j in self.up[r][i]:
                    inc.append([gid[(r, i)], gid[(r + 1, j)]])
        inc.sort()
        return {"rank": self.rank, "faces": faces, "incidence": inc}

    @classmethod
    def from_dict(cls, data: dict) -> "FaceLattice":
        d = int(data["rank"])
        faces = [[] for _ in range(d)]
        where = []
        for r, vs in data["faces"]:
            where.append((r, len(faces[r])))
            faces[r].append(tuple(sorted(vs)))
        up = [[[] for _ in faces[r]] for r in range(d - 1)]
        for a, b in data.get("incidence", []):
            (ra, ia), (rb, ib) = where[a], where[b]
            if rb == ra - 1:
                (ra, ia), (rb, ib) = (rb, ib), (ra, ia)
            if rb != ra + 1:
                raise ValueError(f"incidence {a}-{b} does not join consecutive ranks")
            up[ra][ia].append(ib)
        return cls(d, faces, up)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def lattice_from_vertex_facet(n_vertices: int, facet_vertex_sets) -> FaceLattice:
    """Face lattice from the facet vertex sets of a polytope.

    The faces of a face ``F`` are the inclusion-maximal sets among
    ``F & H`` over facets ``H`` not containing ``F``; this is applied top
    down until rank 0.  Rank-0 faces are the singletons, so vertex ``v`` is
    rank-0 face ``v``.
    """
    facets = [frozenset(f) for f in facet_vertex_sets]
    if not facets:
        raise ValueError("no facets given")
    covered = set().union(*facets)
    if covered != set(range(n_vertices)):
        raise ValueError("facets must cover all vertices 0..n-1")
    levels = [set(facets)]
    while True:
        nxt = set()
        for F in levels[-1]:
            if len(F) == 1:
                continue
            cands = {F & H for H in facets if not F <= H}
            cands.discard(frozenset())
            nxt.update(c for c in cands if not any(c < o for o in cands))
        if not nxt:
            break
        levels.append(nxt)
    levels.reverse()
    rank = len(levels)
    lat = FaceLattice.from_face_sets(rank, levels)
    if lat.faces[0] != [(v,) for v in range(n_vertices)]:
        raise ValueError("vertex sets do not close to a graded lattice")
    return lat


@dataclass
class AxiomReport:
    """Per-axiom outcome with a witness for each failure."""

    bounded: bool = True
    flags_full: bool = True
    strongly_connected: bool = True
    diamond: bool = True
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.bounded and self.flags_full and self.strongly_connected and self.diamond

    def __bool__(self):
        return self.ok


def _check_diamond(L: FaceLattice, rep: AxiomReport) -> None:
    d = L.rank
    for j in range(1, d + 1):
        gs = range(len(L.faces[j])) if j < d else [0]
        for g in gs:
            count = {}
            for h in L.down_of(j, g):
                for f in L.down_of(j - 1, h):
                    count[f] = count.get(f, 0) + 1
            for f, c in count.items():
                if c != 2:
                    rep.diamond = False
                    rep.witnesses["diamond"] = {"F": (j - 2, f), "G": (j, g), "between": c}
                    return


def _check_strong(L: FaceLattice, rep: AxiomReport) -> None:
    d = L.rank
    # sections of rank >= 2 must be connected through comparabilities
    lower_faces = [(EMPTY, 0)] + [(r, i) for r in range(d - 2) for i in range(len(L.faces[r]))]
    for rf, i in lower_faces:
        above = L.faces_above(rf, i) if rf != EMPTY else {r: set(range(len(L.faces[r]))) for r in range(d)}
        tops = [(d, 0)] + [(r, j) for r in range(rf + 3, d) for j in sorted(above.get(r, ()))]
        for rg, j in tops:
            if rg == d:
                inside = {r: above.get(r, set()) for r in range(rf + 1, d)}
            else:
                below = L.faces_below(rg, j)
                inside = {r: above.get(r, set()) & below.get(r, set()) for r in range(rf + 1, rg)}
            nodes = [(r, x) for r, xs in inside.items() for x in xs]
            if not nodes:
                continue
            seen = {nodes[0]}
            queue = deque([nodes[0]])
            while queue:
                r, x = queue.popleft()
                nbrs = []
                if r + 1 in inside:
                    nbrs += [(r + 1, y) for y in L.up_of(r, x) if y in inside[r + 1]]
                if r - 1 in inside:
                    nbrs += [(r - 1, y) for y in L.down_of(r, x) if y in inside[r - 1]]
                for nb in nbrs:
                    if nb not in seen:
                        seen.add(nb)
                        queue.append(nb)
            if len(seen) != len(nodes):
                rep.strongly_connected = False
                rep.witnesses["strongly_connected"] = {"F": (rf, i), "G": (rg, j)}
                return


def verify_axioms(L: FaceLattice) -> AxiomReport:
    """Check the four abstract-polytope axioms.

    Strong flag-connectivity is tested in its equivalent section form:
    every section of rank >= 2 is connected.
    """
    rep = AxiomReport()
    d = L.rank
    for r in range(d):
        if not L.faces[r]:
            rep.bounded = False
            rep.witnesses["bounded"] = {"empty_rank": r}
            return rep
    for r in range(d - 1):
        for i, u in enumerate(L.up[r]):
            if not u:
                rep.flags_full = False
                rep.witnesses["flags_full"] = {"face": (r, i), "missing": "up"}
        for j, dn in enumerate(L.down[r + 1]):
            if not dn:
                rep.flags_full = False
                rep.witnesses["flags_full"] = {"face": (r + 1, j), "missing": "down"}
    _check_diamond(L, rep)
    _check_strong(L, rep)
    return rep


def flags(L: FaceLattice) -> list:
    return [tuple(int(x) for x in f) for f in L.flag_array]


def adjacent_flag(L: FaceLattice, flag, i: int) -> tuple:
    """The i-adjacent flag: same faces except at rank ``i``."""
    if not 0 <= i < L.rank:
        raise ValueError(f"rank {i} out of range 0..{L.rank - 1}")
    flag = tuple(flag)
    return flag[:i] + (L._other(flag, i),) + flag[i + 1:]


def flag_graph_connected(L: FaceLattice) -> bool:
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    n = L.n_flags
    adj = L.adjacency
    rows = np.repeat(np.arange(n), L.rank)
    g = coo_matrix((np.ones(rows.size), (rows, adj.ravel())), shape=(n, n))
    return connected_components(g, directed=False)[0] == 1


def dual_lattice(L: FaceLattice) -> FaceLattice:
    """Order-reversed lattice; dual vertices are the facets of ``L``."""
    d = L.rank
    top = d - 1
    faces = []
    for r in range(d - 1, -1, -1):
        if r == top:
            faces.append([(i,) for i in range(len(L.faces[r]))])
        else:
            faces.append([tuple(sorted(L.faces_above(r, i)[top])) for i in range(len(L.faces[r]))])
    up = [[list(L.down[d - 1 - r][i]) for i in range(len(L.faces[d - 1 - r]))] for r in range(d - 1)]
    return FaceLattice(d, faces, up)


def section(L: FaceLattice, F: tuple, G: tuple) -> FaceLattice:
    """The section ``G/F`` as a fresh lattice.

    ``F`` and ``G`` are ``(rank, index)`` pairs; ``(-1, 0)`` is the empty
    face and ``(L.rank, 0)`` the whole polytope.  The result's ``origin``
    attribute holds ``(rank(F) + 1, ids)`` mapping its faces back into ``L``.
    """
    rf, i = F
    rg, j = G
    if not L.is_below(F, G):
        raise ValueError(f"{F} is not below {G}")
    above = L.faces_above(rf, i) if rf != EMPTY else {r: set(range(len(L.faces[r]))) for r in range(L.rank)}
    below = L.faces_below(rg, j) if rg != L.rank else {r: set(range(len(L.faces[r]))) for r in range(L.rank)}
    ids = [sorted(above.get(r, set()) & below.get(r, set())) for r in range(rf + 1, rg)]
    new_rank = rg - rf - 1
    if new_rank == 0:
        S = FaceLattice(0, [], [])
        S.origin = (rf + 1, [])
        return S
    base = ids[0]
    vid = {x: k for k, x in enumerate(base)}
    faces = [[(k,) for k in range(len(base))]]
    local = [{x: k for k, x in enumerate(level)} for level in ids]
    for s in range(1, new_rank):
        r = rf + 1 + s
        level = []
        for x in ids[s]:
            verts = L.faces_below(r, x).get(rf + 1, set())
            level.append(tuple(sorted(vid[v] for v in verts if v in vid)))
        faces.append(level)
    up = []
    for s in range(new_rank - 1):
        r = rf + 1 + s
        up.append([[local[s + 1][y] for y in L.up[r][x] if y in local[s + 1]] for x in ids[s]])
    S = FaceLattice(new_rank, faces, up)
    S.origin = (rf + 1, ids)
    return S


def flag_colors(L: FaceLattice, rounds: int | None = None) -> np.ndarray:
    """Automorphism-invariant flag colouring by colour refinement.

    Initial colours record the local sizes of each face of the flag; each
    round appends the colours of the i-adjacent flags for every ``i``.
    """
    F = L.flag_array
    d = L.rank
    cols = []
    for r in range(d):
        nd = np.array([len(L.down_of(r, x)) for x in range(len(L.faces[r]))])
        nu = np.array([len(L.up_of(r, x)) for x in range(len(L.faces[r]))])
        nv = np.array([len(f) for f in L.faces[r]])
        cols += [nd[F[:, r]], nu[F[:, r]], nv[F[:, r]]]
    base = np.stack(cols, axis=1) if cols else np.zeros((len(F), 1), dtype=np.int64)
    _, color = np.unique(base, axis=0, return_inverse=True)
    color = color.ravel()
    adj = L.adjacency
    n_cls = color.max() + 1 if len(color) else 0
    it = 0
    while rounds is None or it < rounds:
        sig = np.concatenate([color[:, None], color[adj]], axis=1)
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.ravel()
        it += 1
        if new.max() + 1 == n_cls:
            color = new
            break
        color, n_cls = new, new.max() + 1
    return color


def _propagate(adj1: np.ndarray, adj2: np.ndarray, start1: int, start2: int) -> np.ndarray | None:
    """Extend ``start1 -> start2`` along i-adjacencies; None on conflict."""
    n = len(adj1)
    img = np.full(n, -1, dtype=np.int64)
    used = np.zeros(len(adj2), dtype=bool)
    img[start1] = start2
    used[start2] = True
    a1 = adj1.tolist()
    a2 = adj2.tolist()
    m = img.tolist()
    queue = deque([start1])
    d = adj1.shape[1]
    while queue:
        x = queue.popleft()
        y = m[x]
        row1, row2 = a1[x], a2[y]
        for i in range(d):
            nx, ny = row1[i], row2[i]
            cur = m[nx]
            if cur == -1:
                if used[ny]:
                    return None
                m[nx] = ny
                used[ny] = True
                queue.append(nx)
            elif cur != ny:
                return None
    if any(v == -1 for v in m):
        return None
    return np.array(m, dtype=np.int64)


def _face_map_consistent(L1: FaceLattice, L2: FaceLattice, perm: np.ndarray) -> bool:
    F1, F2 = L1.flag_array, L2.flag_array
    for r in range(L1.rank):
        pairs = np.unique(np.stack([F1[:, r], F2[perm, r]], axis=1), axis=0)
        if len(pairs) != len(L1.faces[r]):
            return False
    return True


def find_isomorphism(L1: FaceLattice, L2: FaceLattice) -> list | None:
    """A rank-preserving isomorphism as per-rank face maps, or None.

    Walks the flag graph from the least flag of ``L1`` to every candidate
    image flag of matching refined colour.
    """
    if L1.rank != L2.rank or L1.f_vector != L2.f_vector or L1.n_flags != L2.n_flags:
        return None
    if L1.rank == 0:
        return []
    c1, c2 = _joint_colors(L1, L2)
    for cand in np.flatnonzero(c2 == c1[0]):
        perm = _propagate(L1.adjacency, L2.adjacency, 0, int(cand))
        if perm is not None and _face_map_consistent(L1, L2, perm):
            F2 = L2.flag_array
            return [F2[perm[L1.flag_representatives[r]], r] for r in range(L1.rank)]
    return None


def _joint_colors(L1: FaceLattice, L2: FaceLattice):
    """Refine colours of two lattices in a common palette."""
    def start(L):
        F = L.flag_array
        cols = []
        for r in range(L.rank):
            nd = np.array([len(L.down_of(r, x)) for x in range(len(L.faces[r]))])
            nu = np.array([len(L.up_of(r, x)) for x in range(len(L.faces[r]))])
            cols += [nd[F[:, r]], nu[F[:, r]]]
        return np.stack(cols, axis=1)

    n1 = L1.n_flags
    adj = np.concatenate([L1.adjacency, L2.adjacency + n1])
    _, color = np.unique(np.concatenate([start(L1), start(L2)]), axis=0, return_inverse=True)
    color = color.ravel()
    n_cls = color.max() + 1
    while True:
        sig = np.concatenate([color[:, None], color[adj]], axis=1)
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.ravel()
        if new.max() + 1 == n_cls:
            break
        color, n_cls = new, new.max() + 1
    return color[:n1], color[n1:]


def is_isomorphic(L1: FaceLattice, L2: FaceLattice) -> bool:
    return find_isomorphism(L1, L2) is not None
