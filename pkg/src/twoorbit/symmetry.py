"""Symmetry groups, flag orbits and the audits built on them.

Groups are stored by generators acting on the flags of a lattice.  Both
the geometric group G(P) and the automorphism group of the face lattice
act freely on flags, so an element is pinned down by the image of a
single flag and group orders come out of orbit sizes.  The geometric
search counts its elements independently, which is what makes the free
action checkable rather than assumed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .exact import QArray, inverse, rank as exact_rank
from .geometry import DegenerateError, GeoPolytope, centered
from .lattice import (
    FaceLattice,
    _face_map_consistent,
    _propagate,
    flag_colors,
    section,
)

__all__ = [
    "PermGroup",
    "OrbitPartition",
    "ClassSymbol",
    "geometric_symmetries",
    "combinatorial_automorphisms",
    "flag_orbits",
    "face_orbit_counts",
    "orbit_class",
    "restricted_subgroup",
    "section_regularity_audit",
    "chain_orbits",
    "quasiregular_check",
    "is_flag_automorphism",
    "audit_two_orbit",
]


# -- groups and partitions ---------------------------------------------

@dataclass
class PermGroup:
    """A group acting on the flags of ``lattice``.

    ``flag_gens`` are flag permutations.  ``order`` is counted by the
    routine that built the group; for geometric groups it is the number of
    Gram-preserving vertex maps found, not an orbit size.
    """

    lattice: FaceLattice
    flag_gens: list
    order: int
    kind: str
    vertex_gens: list | None = None
    matrices: list | None = None
    extra: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return self.lattice.n_flags

    def face_perms(self, k: int) -> list:
        return self.lattice.face_perms_from_flag_perm(self.flag_gens[k])

    @cached_property
    def orbit_labels(self) -> np.ndarray:
        return _components(self.lattice.n_flags, self.flag_gens)

    def flag_orbit(self, flag: int = 0) -> np.ndarray:
        lab = self.orbit_labels
        return np.flatnonzero(lab == lab[flag])

    def element_to(self, src: int, dst: int) -> np.ndarray | None:
        """Flag action of the element sending flag ``src`` to ``dst``."""
        lab = self.orbit_labels
        if lab[src] != lab[dst]:
            return None
        adj = self.lattice.adjacency
        return _propagate(adj, adj, src, dst)

    def elements(self) -> list:
        """Every element as a flag permutation (small groups only)."""
        return [self.element_to(0, int(y)) for y in self.flag_orbit(0)]


@dataclass
class OrbitPartition:
    kind: str
    labels: np.ndarray
    sizes: np.ndarray
    objects: np.ndarray | None = None

    @property
    def n_orbits(self) -> int:
        return len(self.sizes)


def _components(n: int, perms) -> np.ndarray:
    """Orbit labels (numbered by first occurrence) of permutations on ``range(n)``."""
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    src = [np.arange(n)] + [np.arange(n) for _ in perms]
    dst = [np.arange(n)] + [np.asarray(p) for p in perms]
    g = coo_matrix((np.ones(n * len(src)), (np.concatenate(src), np.concatenate(dst))), shape=(n, n))
    lab = connected_components(g, directed=False)[1]
    _, first, inv = np.unique(lab, return_index=True, return_inverse=True)
    rank_of = np.argsort(np.argsort(first))
    return rank_of[inv.ravel()]


def _partition(kind: str, labels: np.ndarray, objects=None) -> OrbitPartition:
    sizes = np.bincount(labels) if len(labels) else np.zeros(0, dtype=np.int64)
    return OrbitPartition(kind, labels, sizes, objects)


def _orbit_mask(start: int, perms, n: int) -> np.ndarray:
    seen = np.zeros(n, dtype=bool)
    seen[start] = True
    frontier = np.array([start])
    while len(frontier):
        nxt = np.unique(np.concatenate([p[frontier] for p in perms])) if perms else np.zeros(0, dtype=np.int64)
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        frontier = nxt
    return seen


def is_flag_automorphism(L: FaceLattice, perm: np.ndarray) -> bool:
    """True when ``perm`` commutes with every i-adjacency and respects faces."""
    adj = L.adjacency
    perm = np.asarray(perm)
    if not np.array_equal(np.sort(perm), np.arange(L.n_flags)):
        return False
    if not np.array_equal(adj[perm], perm[adj]):
        return False
    return _face_map_consistent(L, L, perm)


# -- geometric symmetries ----------------------------------------------

def _vertex_colours(C: np.ndarray) -> np.ndarray:
    """Refine vertex colours by sorted (inner product, colour) multisets."""
    _, col = np.unique(np.sort(C, axis=1), axis=0, return_inverse=True)
    col = col.ravel()
    ncode = int(C.max()) + 1
    while True:
        sig = np.sort(C * (col.max() + 1) + col[None, :], axis=1)
        sig = np.concatenate([col[:, None] * ncode, sig], axis=1)
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.ravel()
        if new.max() == col.max():
            return new
        col = new


def _spanning_base(V: QArray, colour: np.ndarray) -> list:
    """Indices of ``dim`` linearly independent vertices, rarest colours first."""
    d = V.shape[1]
    counts = np.bincount(colour)
    order = sorted(range(V.shape[0]), key=lambda v: (counts[colour[v]], v))
    base = []
    for v in order:
        trial = base + [v]
        sub = QArray(V.P[trial], V.Q[trial], V.r, V.D)
        if exact_rank(sub) == len(trial):
            base = trial
            if len(base) == d:
                return base
    raise DegenerateError("vertices do not span the ambient space")


def _row_codes(M: np.ndarray, radix: int) -> np.ndarray:
    out = np.zeros(M.shape[0], dtype=np.int64)
    for j in range(M.shape[1]):
        out = out * radix + M[:, j]
    return out


def _face_index(L: FaceLattice) -> list:
    return [{fs: i for i, fs in enumerate(L.faces[r])} for r in range(L.rank)]


def _face_perms_from_vertex_perm(L: FaceLattice, vperm: np.ndarray, index=None) -> list:
    index = index or _face_index(L)
    out = []
    for r in range(L.rank):
        lut = index[r]
        out.append(np.array([lut[tuple(sorted(vperm[list(fs)].tolist()))] for fs in L.faces[r]], dtype=np.int64))
    return out


def geometric_symmetries(P: GeoPolytope, keep_elements: bool = False) -> PermGroup:
    """G(P) as vertex permutations preserving all centred scalar products.

    The centred vertices span the space, so each such permutation is the
    restriction of a unique orthogonal map.  The search fixes a spanning
    base of vertices and backtracks over their images, pruned by refined
    vertex colours and by scalar products with the images chosen so far;
    at a leaf the map of every other vertex is read off its scalar products
    with the base.  Every leaf that closes up is one group element, so
    ``order`` is an exhaustive count.
    """
    L = P.lattice
    Q = centered(P)
    V = Q.vertices
    n, d = V.shape
    C = (V @ Q.gram @ V.T).entry_codes().astype(np.int64)
    colour = _vertex_colours(C)
    base = _spanning_base(V, colour)
    radix = int(C.max()) + 1
    if radix ** d >= 2**62:
        raise OverflowError("too many distinct scalar products for row hashing")
    key0 = _row_codes(C[:, base], radix)
    order0 = np.argsort(key0)
    key0_sorted = key0[order0]

    index = _face_index(L)
    F0 = L.flag_array[0]
    base_flag_sets = [L.faces[r][F0[r]] for r in range(L.rank)]
    vertex_gens, flag_gens, elements = [], [], []
    orbit = np.zeros(L.n_flags, dtype=bool)
    orbit[0] = True
    count = 0

    def leaf(imgs):
        nonlocal orbit, count
        key1 = _row_codes(C[:, imgs], radix)
        order1 = np.argsort(key1)
        if not np.array_equal(key1[order1], key0_sorted):
            return
        vperm = np.empty(n, dtype=np.int64)
        vperm[order0] = order1
        count += 1
        if keep_elements:
            elements.append(vperm)
        img = [index[r][tuple(sorted(vperm[list(fs)].tolist()))] for r, fs in enumerate(base_flag_sets)]
        fidx = int(L.flag_index([img])[0])
        if not orbit[fidx]:
            fperm = L.flag_perm_from_face_perms(_face_perms_from_vertex_perm(L, vperm, index))
            vertex_gens.append(vperm)
            flag_gens.append(fperm)
            orbit = _orbit_mask(0, flag_gens, L.n_flags)

    def search(level, imgs):
        if level == d:
            leaf(imgs)
            return
        b = base[level]
        ok = colour == colour[b]
        for j in range(level):
            ok &= C[:, imgs[j]] == C[b, base[j]]
        for c in np.flatnonzero(ok):
            search(level + 1, imgs + [int(c)])

    search(0, [])
    G = PermGroup(L, flag_gens, count, "geometric", vertex_gens)
    G.extra["base"] = base
    G.extra["polytope"] = Q
    if keep_elements:
        G.extra["vertex_elements"] = elements
    return G


def symmetry_matrix(P: GeoPolytope, vperm: np.ndarray, base=None) -> QArray:
    """Exact linear map (on centred coordinates) inducing vertex map ``vperm``."""
    V = centered(P).vertices
    d = V.shape[1]
    base = base or _spanning_base(V, np.zeros(V.shape[0], dtype=np.int64))
    img = [int(vperm[b]) for b in base]
    A = QArray(V.P[base], V.Q[base], V.r, V.D)
    B = QArray(V.P[img], V.Q[img], V.r, V.D)
    # rows: A M^T = B, so M^T = A^{-1} B
    return (inverse(A) @ B).T if d else A


# -- combinatorial automorphisms ---------------------------------------

def combinatorial_automorphisms(L: FaceLattice, exhaustive: bool = False) -> PermGroup:
    """Automorphism group of the face lattice, acting on flags.

    For each candidate image of the least flag the map is propagated
    along i-adjacencies.  By default candidates are restricted to flags of
    the same refined colour and skipped once they lie in the orbit of the
    automorphisms already found; ``exhaustive=True`` tries every flag and
    keeps every success, which serves as a slow oracle.
    """
    adj = L.adjacency
    n = L.n_flags
    gens = []
    if exhaustive:
        for c in range(n):
            perm = _propagate(adj, adj, 0, c)
            if perm is not None and _face_map_consistent(L, L, perm):
                gens.append(perm)
        return PermGroup(L, gens, len(gens), "combinatorial", extra={"exhaustive": True})
    colour = flag_colors(L)
    orbit = np.zeros(n, dtype=bool)
    orbit[0] = True
    for c in np.flatnonzero(colour == colour[0]):
        if orbit[c]:
            continue
        perm = _propagate(adj, adj, 0, int(c))
        if perm is not None and _face_map_consistent(L, L, perm):
            gens.append(perm)
            orbit = _orbit_mask(0, gens, n)
    return PermGroup(L, gens, int(orbit.sum()), "combinatorial")


# -- orbits ----------------------------------------------------------------

def flag_orbits(group: PermGroup, L: FaceLattice | None = None) -> OrbitPartition:
    L = L or group.lattice
    return _partition("flags", group.orbit_labels)


def face_orbits(group: PermGroup, r: int) -> OrbitPartition:
    L = group.lattice
    perms = [L.face_perms_from_flag_perm(g)[r] for g in group.flag_gens]
    return _partition(f"faces:{r}", _components(len(L.faces[r]), perms))


def face_orbit_counts(group: PermGroup, L: FaceLattice | None = None) -> tuple:
    """Transitivity vector: number of face orbits per rank."""
    L = L or group.lattice
    return tuple(face_orbits(group, r).n_orbits for r in range(L.rank))


@dataclass(frozen=True)
class ClassSymbol:
    """Regular, two-orbit class ``2_I``, or k-orbit."""

    n_orbits: int
    rank: int
    I: frozenset = frozenset()

    @property
    def kind(self) -> str:
        return {1: "regular", 2: "two-orbit"}.get(self.n_orbits, "k-orbit")

    @property
    def intransitive_rank(self) -> int | None:
        if self.n_orbits != 2:
            return None
        rest = set(range(self.rank)) - set(self.I)
        return rest.pop() if len(rest) == 1 else None

    def __str__(self) -> str:
        if self.n_orbits == 1:
            return "regular"
        if self.n_orbits == 2:
            return "2_{" + ",".join(str(i) for i in sorted(self.I)) + "}"
        return f"{self.n_orbits}-orbit"

    def dual(self) -> "ClassSymbol":
        return ClassSymbol(self.n_orbits, self.rank, frozenset(self.rank - 1 - i for i in self.I))


class InconsistentClassError(ValueError):
    """Some i-adjacency keeps one flag in its orbit but not another."""


def orbit_class(L: FaceLattice, group: PermGroup) -> ClassSymbol:
    lab = group.orbit_labels
    k = int(lab.max()) + 1
    if k != 2:
        return ClassSymbol(k, L.rank)
    same = lab[L.adjacency] == lab[:, None]
    I = set()
    for i in range(L.rank):
        if same[:, i].all():
            I.add(i)
        elif same[:, i].any():
            raise InconsistentClassError(f"{i}-adjacency is not uniform across flags")
    return ClassSymbol(2, L.rank, frozenset(I))


def chain_orbits(group: PermGroup, L: FaceLattice | None, cotype) -> OrbitPartition:
    """Orbits on chains that omit exactly the ranks in ``cotype``."""
    L = L or group.lattice
    ranks = [r for r in range(L.rank) if r not in set(cotype)]
    F = L.flag_array
    if not ranks:
        return _partition("chains", np.zeros(1, dtype=np.int64), np.zeros((1, 0), dtype=np.int64))
    chains, inv = np.unique(F[:, ranks], axis=0, return_inverse=True)
    inv = inv.ravel()
    first = np.unique(inv, return_index=True)[1]
    perms = [inv[g[first]] for g in group.flag_gens]
    return _partition("chains", _components(len(chains), perms), chains)


# -- sections and restricted subgroups ------------------------------------

def _section_face_perms(L: FaceLattice, S: FaceLattice, face_perms) -> list:
    off, ids = S.origin
    out = []
    for s in range(S.rank):
        pos = {x: t for t, x in enumerate(ids[s])}
        out.append(np.array([pos[int(face_perms[off + s][x])] for x in ids[s]], dtype=np.int64))
    return out


def _fixes_outside(L: FaceLattice, fp: list, F, G) -> bool:
    below = L.faces_below(*F) if 0 <= F[0] else {}
    above = L.faces_above(*G) if G[0] < L.rank else {}
    checks = [(F[0], {F[1]}), (G[0], {G[1]})]
    checks += list(below.items()) + list(above.items())
    for r, xs in checks:
        if 0 <= r < L.rank and any(int(fp[r][x]) != x for x in xs):
            return False
    return True


def restricted_subgroup(group: PermGroup, L: FaceLattice | None, F: tuple, G: tuple) -> PermGroup:
    """Elements fixing every face <= F and every face >= G, acting on G/F.

    Faces are ``(rank, index)``; ``(-1, 0)`` and ``(rank, 0)`` are the
    improper faces.  Elements are found from flag images of a flag through
    ``F`` and ``G``, so the order is exact rather than inferred.
    """
    L = L or group.lattice
    if not L.is_below(F, G):
        raise ValueError(f"{F} is not below {G}")
    S = section(L, F, G)
    Fl = L.flag_array
    through = np.ones(L.n_flags, dtype=bool)
    if F[0] >= 0:
        through &= Fl[:, F[0]] == F[1]
    if G[0] < L.rank:
        through &= Fl[:, G[0]] == G[1]
    cand = np.flatnonzero(through)
    start = int(cand[0])
    lo, hi = F[0], G[0]
    keep = [r for r in range(L.rank) if r <= lo or r >= hi]
    cand = cand[(Fl[cand][:, keep] == Fl[start, keep]).all(axis=1)]
    lab = group.orbit_labels
    gens = []
    for c in cand:
        if lab[c] != lab[start]:
            continue
        perm = _propagate(L.adjacency, L.adjacency, start, int(c))
        fp = L.face_perms_from_flag_perm(perm)
        if not _fixes_outside(L, fp, F, G):
            continue
        gens.append(S.flag_perm_from_face_perms(_section_face_perms(L, S, fp)) if S.rank else np.zeros(1, dtype=np.int64))
    return PermGroup(S, gens, len(gens), "restricted", extra={"F": F, "G": G})


def _pair_representatives(L: FaceLattice, group: PermGroup, lo: int, hi: int) -> list:
    """One incident pair (F, G) of ranks (lo, hi) per flag orbit."""
    lab = group.orbit_labels
    Fl = L.flag_array
    out = set()
    for o in range(int(lab.max()) + 1):
        f = Fl[int(np.flatnonzero(lab == o)[0])]
        F = (lo, int(f[lo]) if lo >= 0 else 0)
        G = (hi, int(f[hi]) if hi < L.rank else 0)
        out.add((F, G))
    return sorted(out)


def section_regularity_audit(L: FaceLattice, group: PermGroup, j: int | None = None) -> dict:
    """Check regularity of sections of a two-orbit j-intransitive object.

    Sections G/F with rank G <= j or rank F >= j must be combinatorially
    regular; those straddling ``j`` must split into exactly two flag
    orbits under the restricted subgroup.
    """
    if j is None:
        j = orbit_class(L, group).intransitive_rank
        if j is None:
            raise ValueError("not a two-orbit j-intransitive object")
    d = L.rank
    rows = []
    for lo in range(-1, d):
        for hi in range(lo + 2, d + 1):
            for F, G in _pair_representatives(L, group, lo, hi):
                if (lo, hi) == (-1, d):
                    continue
                S = section(L, F, G)
                if hi <= j or lo >= j:
                    n = flag_orbits(combinatorial_automorphisms(S)).n_orbits
                    want = 1
                else:
                    n = flag_orbits(restricted_subgroup(group, L, F, G)).n_orbits
                    want = 2
                rows.append({"F": F, "G": G, "rank": S.rank, "orbits": n, "expected": want, "ok": n == want})
    return {"j": j, "sections": rows, "ok": all(r["ok"] for r in rows)}


# -- two-orbit audits ----------------------------------------------------

def audit_two_orbit(L: FaceLattice, group: PermGroup) -> dict:
    """Orbit-adjacency law, alternation, and cotype-{j} chain transitivity."""
    cls = orbit_class(L, group)
    j = cls.intransitive_rank
    out = {"class": str(cls), "j": j}
    lab = group.orbit_labels
    same = lab[L.adjacency] == lab[:, None]
    if j is None:
        out["ok"] = cls.n_orbits == 2
        return out
    expect = np.ones(L.rank, dtype=bool)
    expect[j] = False
    out["adjacency_law"] = bool((same == expect[None, :]).all())
    jl = face_orbits(group, j).labels
    alt = True
    Fl = L.flag_array
    lo_hi = set()
    for f in Fl:
        lo = int(f[j - 1]) if j > 0 else 0
        hi = int(f[j + 1]) if j < L.rank - 1 else 0
        lo_hi.add((lo, hi))
    for lo, hi in lo_hi:
        a = set(L.up_of(j - 1, lo)) if j > 0 else set(range(len(L.faces[j])))
        b = set(L.down_of(j + 1, hi)) if j < L.rank - 1 else set(range(len(L.faces[j])))
        mids = sorted(a & b)
        if len(mids) != 2 or jl[mids[0]] == jl[mids[1]]:
            alt = False
            break
    out["alternation"] = alt
    out["chain_transitive"] = chain_orbits(group, L, {j}).n_orbits == 1
    out["ok"] = out["adjacency_law"] and alt and out["chain_transitive"]
    return out


def quasiregular_check(obj, group: PermGroup | None = None) -> bool:
    """Vertex-transitive, two facet orbits of regular facets, alternating at ridges."""
    L = obj.lattice if hasattr(obj, "lattice") else obj
    if group is None:
        group = getattr(obj, "group", None)
        if group is None:
            group = geometric_symmetries(obj)
    d = L.rank
    if face_orbits(group, 0).n_orbits != 1:
        return False
    fac = face_orbits(group, d - 1)
    if fac.n_orbits != 2:
        return False
    for o in range(2):
        rep = int(np.flatnonzero(fac.labels == o)[0])
        sub = restricted_subgroup(group, L, (-1, 0), (d - 1, rep))
        if flag_orbits(sub).n_orbits != 1:
            return False
    for ridge in range(len(L.faces[d - 2])):
        ups = L.up_of(d - 2, ridge)
        if len(ups) != 2 or fac.labels[ups[0]] == fac.labels[ups[1]]:
            return False
    return True

