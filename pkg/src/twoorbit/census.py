"""Named objects, census rows, theorem verification and exports."""
from __future__ import annotations

import io
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

import numpy as np

from .coxeter import regular_polytope
from .exact import PHI, QArray, QNum
from .geometry import GeoPolytope, centered, hull_from_points, polar_dual, rectify
from .lattice import FaceLattice, lattice_from_vertex_facet, verify_axioms
from .symmetry import (
    combinatorial_automorphisms,
    face_orbit_counts,
    flag_orbits,
    geometric_symmetries,
    orbit_class,
)
from .tiling import TILING_NAMES, PeriodicComplex, build_tiling, torus_quotient

__all__ = [
    "OutOfScope",
    "polygon_two_orbit",
    "demicube_check",
    "build_named",
    "REGISTRY",
    "census_row",
    "run_census",
    "load_golden",
    "verify_theorems",
    "export",
    "rows_to_tsv",
    "census_names",
    "analyze_dict",
    "theorem_checks",
]


class OutOfScope(NotImplementedError):
    """Registry entry that is documented but deliberately not constructed."""

    def __init__(self, name: str, oracle: dict):
        super().__init__(f"{name} is out of scope; reference numbers: {oracle}")
        self.name = name
        self.oracle = oracle


# -- polygons ---------------------------------------------------------------

def _half_turn_cos(n: int) -> QNum:
    """cos(pi/n) in the smallest quadratic field that holds it."""
    table = {
        2: QNum(0),
        3: QNum(Fraction(1, 2)),
        4: QNum(0, Fraction(1, 2), 2),
        5: PHI / 2,
        6: QNum(0, Fraction(1, 2), 3),
    }
    if n not in table:
        raise ValueError(f"cos(pi/{n}) is not quadratic; supported n are 2..6")
    return table[n]


def polygon_two_orbit(n: int, lam=2, variant: str = "edge_alternating") -> GeoPolytope:
    """A 2n-gon with equal angles and edges alternating 1, lam (or its polar dual).

    Coordinates use two unit edge directions at angle pi/n as basis, so the
    Gram matrix is ``[[1, c], [c, 1]]`` with ``c = cos(pi/n)`` and each next
    edge direction is ``2c d_k - d_{k-1}``.  ``lam`` and ``1/lam`` give
    similar polygons; ``lam`` is normalised to be at least one.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if variant not in ("edge_alternating", "angle_alternating"):
        raise ValueError(f"unknown variant {variant!r}")
    c = _half_turn_cos(n)
    D = c.D
    lam = lam if isinstance(lam, QNum) else QNum(Fraction(lam), 0, D)
    if lam.D != D and lam.D:
        raise ValueError("lambda must lie in the field of cos(pi/n)")
    lam = QNum(lam.a, lam.b, D) if lam.D != D else lam
    if lam.sign() <= 0:
        raise ValueError("lambda must be positive")
    if lam < 1:
        lam = 1 / lam
    zero, one = QNum(0, 0, D), QNum(1, 0, D)
    dirs = [(one, zero), (zero, one)]
    while len(dirs) < 2 * n:
        (a1, b1), (a0, b0) = dirs[-1], dirs[-2]
        dirs.append((2 * c * a1 - a0, 2 * c * b1 - b0))
    pts = [(zero, zero)]
    for k in range(2 * n - 1):
        s = one if k % 2 == 0 else lam
        x, y = pts[-1]
        pts.append((x + s * dirs[k][0], y + s * dirs[k][1]))
    m = 2 * n
    lat = lattice_from_vertex_facet(m, [(i, (i + 1) % m) for i in range(m)])
    gram = QArray.from_entries([[one, c], [c, one]], D)
    P = GeoPolytope(lat, QArray.from_entries(pts, D), gram, f"edge_alt_{m}gon", "polygon")
    P.extra["lambda"] = lam
    if variant == "angle_alternating":
        P = polar_dual(P)
        P.name = f"angle_alt_{m}gon"
        P.extra["lambda"] = lam
    return P


# -- 4-demicube -------------------------------------------------------------

def _demicube_vertices():
    pts = [(0, 0, 0, 0), (1, 1, 1, 1)]
    for i in range(4):
        for j in range(i + 1, 4):
            v = [0, 0, 0, 0]
            v[i] = v[j] = 1
            pts.append(tuple(v))
    return sorted(pts)


def demicube_polytope() -> GeoPolytope:
    V = QArray.from_entries(_demicube_vertices())
    return hull_from_points(V, QArray.identity(4), "demicube_4")


def demicube_check(d: int = 4) -> dict:
    """Alternate vertices of the 4-cube: 4 orthogonal axes, regular cross-polytope."""
    if d != 4:
        raise ValueError("only d = 4 is in scope")
    P = demicube_polytope()
    C = centered(P).vertices
    n = C.shape[0]
    rows = [tuple(r) for r in C.entries()]
    pos = {r: i for i, r in enumerate(rows)}
    partner = np.array([pos[tuple(-x for x in r)] for r in rows])
    involution = bool(np.all(partner[partner] == np.arange(n)) and np.all(partner != np.arange(n)))
    orig = [tuple(int(x.a) for x in r) for r in P.vertices.entries()]
    complement = all(orig[partner[i]] == tuple(1 - x for x in orig[i]) for i in range(n))
    axes = sorted({tuple(sorted((i, int(partner[i])))) for i in range(n)})
    Gm = (C @ C.T)
    reps = [a for a, _ in axes]
    norms = {Gm[i, i] for i in reps}
    orth = all(Gm[a, b] == 0 for a in reps for b in reps if a != b)
    G = geometric_symmetries(P)
    orbits = flag_orbits(G).n_orbits
    return {
        "axes": len(axes),
        "orthogonal": orth,
        "equal_norms": len(norms) == 1,
        "antipodal_involution": involution,
        "complement_pairing": complement,
        "order": G.order,
        "flags": P.lattice.n_flags,
        "orbits": orbits,
        "cross_polytope": len(axes) == 4 and orth and len(norms) == 1 and orbits == 1,
        "polytope": P,
    }


# -- registry -------------------------------------------------------------------

def _cached(fn):
    cache = {}

    def wrapper():
        if "v" not in cache:
            cache["v"] = fn()
        return cache["v"]

    return wrapper


_cubocta = _cached(lambda: _named(rectify(regular_polytope("{4,3}")), "cuboctahedron"))
_icosid = _cached(lambda: _named(rectify(regular_polytope("{5,3}")), "icosidodecahedron"))


def _named(P: GeoPolytope, name: str) -> GeoPolytope:
    P.name = name
    return P


SNUB_24_CELL = {"flags": 5760, "order": 576, "orbits": 10}


def _snub():
    raise OutOfScope("snub_24_cell", SNUB_24_CELL)


_REGULAR = {
    "tetrahedron": "{3,3}",
    "cube": "{4,3}",
    "octahedron": "{3,4}",
    "dodecahedron": "{5,3}",
    "icosahedron": "{3,5}",
    "4_simplex": "{3,3,3}",
    "tesseract": "{4,3,3}",
    "16_cell": "{3,3,4}",
    "24_cell": "{3,4,3}",
    "120_cell": "{5,3,3}",
    "600_cell": "{3,3,5}",
}

REGISTRY = {name: (lambda s=s, name=name: _named(regular_polytope(s), name)) for name, s in _REGULAR.items()}
REGISTRY.update(
    {
        "cuboctahedron": _cubocta,
        "icosidodecahedron": _icosid,
        "rhombic_dodecahedron": lambda: _named(polar_dual(_cubocta()), "rhombic_dodecahedron"),
        "rhombic_triacontahedron": lambda: _named(polar_dual(_icosid()), "rhombic_triacontahedron"),
        "rectified_4_simplex": lambda: _named(rectify(regular_polytope("{3,3,3}")), "rectified_4_simplex"),
        "rectified_600_cell": lambda: _named(rectify(regular_polytope("{3,3,5}")), "rectified_600_cell"),
        "demicube_4": demicube_polytope,
        "snub_24_cell": _snub,
    }
)
for _n in range(2, 7):
    for _v, _tag in (("edge_alternating", "edge_alt"), ("angle_alternating", "angle_alt")):
        REGISTRY[f"{_tag}_{2 * _n}gon"] = lambda n=_n, v=_v: polygon_two_orbit(n, 2, v)
    REGISTRY[f"regular_{2 * _n}gon"] = lambda n=_n: _named(polygon_two_orbit(n, 1), f"regular_{2 * n}gon")
for _t in TILING_NAMES:
    REGISTRY[_t] = lambda t=_t: build_tiling(t)


def build_named(name: str, **params):
    """Build a registered polytope or tiling; ``params`` go to parametric builders."""
    if name not in REGISTRY:
        raise KeyError(f"unknown object {name!r}")
    if params:
        if name in TILING_NAMES:
            return build_tiling(name, **params)
        for tag, variant in (("edge_alt_", "edge_alternating"), ("angle_alt_", "angle_alternating")):
            if name.startswith(tag):
                n = int(name[len(tag):-3]) // 2
                return polygon_two_orbit(n, params.get("lam", 2), variant)
        raise TypeError(f"{name} takes no parameters")
    return REGISTRY[name]()


# -- census rows --------------------------------------------------------------

def _status(n: int) -> str:
    return {1: "regular", 2: "two-orbit"}.get(n, "other")


def census_row(name: str, obj=None, k: int = 3) -> dict:
    """One report row.  Tiling rows are per translation cell of the quotient."""
    obj = obj if obj is not None else build_named(name)
    if isinstance(obj, PeriodicComplex):
        Q = torus_quotient(obj, k)
        L = Q.lattice
        G = Q.group
        cells = k**obj.d
        order, flags = G.order // cells, L.n_flags // cells
        f_vec = obj.counts
        d = obj.d
        kind = "tiling"
    else:
        L = obj.lattice
        G = geometric_symmetries(obj)
        order, flags, f_vec, d, kind = G.order, L.n_flags, L.f_vector, obj.dim, "polytope"
        cells = 1
    ax = verify_axioms(L)
    if not ax:
        raise RuntimeError(f"{name}: lattice fails the polytope axioms: {ax.witnesses}")
    Gam = combinatorial_automorphisms(L)
    og = flag_orbits(G).n_orbits
    oc = flag_orbits(Gam).n_orbits
    return {
        "name": name,
        "kind": kind,
        "d": d,
        "f_vector": list(f_vec),
        "flags": flags,
        "G": order,
        "Gamma": Gam.order // cells,
        "orbits_G": og,
        "orbits_Gamma": oc,
        "transitivity": list(face_orbit_counts(G)),
        "class": str(orbit_class(L, G)),
        "combinatorial_status": _status(oc),
    }


TSV_COLUMNS = [
    "name", "d", "f_vector", "flags", "G", "Gamma", "orbits_G", "orbits_Gamma",
    "transitivity", "class", "combinatorial_status",
]


def _cell(v) -> str:
    if isinstance(v, list):
        return "(" + ",".join(str(x) for x in v) + ")"
    return str(v)


def rows_to_tsv(rows) -> str:
    out = ["\t".join(TSV_COLUMNS)]
    for r in rows:
        out.append("\t".join(_cell(r[c]) for c in TSV_COLUMNS))
    return "\n".join(out) + "\n"


def census_names(include_large: bool = True) -> list:
    names = [n for n in REGISTRY if n != "snub_24_cell"]
    if not include_large:
        names = [n for n in names if n not in ("rectified_600_cell", "600_cell", "120_cell")]
    return sorted(names)


def run_census(names=None, k: int = 3) -> list:
    names = sorted(names) if names is not None else census_names()
    return [census_row(n, k=k) for n in names]


# -- golden expectations and theorem checks ---------------------------------

def load_golden() -> dict:
    text = resources.files("twoorbit").joinpath("data/census_golden.json").read_text()
    return json.loads(text)


_COMPARED = ("f_vector", "flags", "G", "Gamma", "orbits_G", "orbits_Gamma", "transitivity", "class")


def _diff(row: dict, expected: dict) -> dict:
    out = {}
    for key in _COMPARED:
        if key in expected and expected[key] != row[key]:
            out[key] = {"expected": expected[key], "got": row[key]}
    return out


def theorem_checks(rows) -> list:
    """Classification statements restricted to the census objects."""
    by = {r["name"]: r for r in rows}

    def two(kind, d):
        return sorted(r["name"] for r in rows if r["kind"] == kind and r["d"] == d and r["orbits_G"] == 2)

    checks = []

    def add(name, got, want):
        checks.append({"check": name, "got": got, "expected": want, "ok": got == want})

    polys3 = ["cuboctahedron", "icosidodecahedron", "rhombic_dodecahedron", "rhombic_triacontahedron"]
    if all(n in by for n in polys3):
        add("two-orbit 3-polytopes", two("polytope", 3), sorted(polys3))
    if any(r["kind"] == "polytope" and r["d"] >= 4 for r in rows):
        add("two-orbit polytopes with d >= 4", sorted(n for d in (4, 5) for n in two("polytope", d)), [])
    tl2 = ["rectangle", "rhombille", "rhombus", "trihexagonal"]
    if all(n in by for n in tl2):
        add("two-orbit plane tilings", two("tiling", 2), sorted(tl2))
    if all(n in by for n in ("tet_oct", "rhombic_dodec")):
        add("two-orbit 3-space tilings", two("tiling", 3), ["rhombic_dodec", "tet_oct"])
    bad_j = []
    for r in rows:
        if r["kind"] == "polytope" and r["orbits_G"] == 2:
            d = r["d"]
            I = set(int(x) for x in r["class"][3:-1].split(",") if x)
            j = (set(range(d)) - I).pop()
            if j not in (0, d - 1):
                bad_j.append(r["name"])
    add("two-orbit convex polytopes are 0- or (d-1)-intransitive", bad_j, [])
    ft = sorted(
        r["name"] for r in rows
        if r["orbits_G"] > 1 and all(x == 1 for x in r["transitivity"])
    )
    add("fully transitive entries that are not regular", ft, ["rhombus"] if "rhombus" in by else [])
    return checks


@dataclass
class VerifyResult:
    status: int
    report: str
    rows: list
    checks: list


def verify_theorems(only=None, k: int = 3, golden=None, stability: bool = True) -> VerifyResult:
    """Compare census rows against the golden file; exit status 0, 1 or 2."""
    golden = golden if golden is not None else load_golden()
    expected = golden["rows"]
    names = [only] if only else sorted(expected)
    lines, rows, status = [], [], 0
    for name in names:
        if name not in expected:
            lines.append(f"FAIL {name}: no golden expectation")
            status = max(status, 1)
            continue
        try:
            row = census_row(name, k=k)
            if stability and row["kind"] == "tiling":
                again = census_row(name, k=k + 1)
                for key in ("flags", "G", "orbits_G", "transitivity", "class"):
                    if again[key] != row[key]:
                        row.setdefault("unstable", []).append(key)
        except Exception as exc:  # construction failure
            lines.append(f"ERROR {name}: {type(exc).__name__}: {exc}")
            status = 2
            continue
        rows.append(row)
        diff = _diff(row, expected[name])
        if row.get("unstable"):
            diff["k-stability"] = row["unstable"]
        if diff:
            status = max(status, 1)
            lines.append(f"FAIL {name}: {json.dumps(diff, sort_keys=True)}")
        else:
            lines.append(
                f"PASS {name}: flags={row['flags']} |G|={row['G']} orbits={row['orbits_G']} "
                f"transitivity={_cell(row['transitivity'])} class={row['class']}"
            )
    checks = theorem_checks(rows) if not only else []
    for c in checks:
        lines.append(f"{'PASS' if c['ok'] else 'FAIL'} [{c['check']}] got={c['got']}")
        if not c["ok"]:
            status = max(status, 1)
    return VerifyResult(status, "\n".join(lines) + "\n", rows, checks)


# -- exports --------------------------------------------------------------

def _qstr(x: QNum) -> str:
    return str(x)


def _cycle(L: FaceLattice, facet: int) -> list:
    """Vertices of a 2-face in cyclic order, following its edges."""
    edges = [L.faces[1][e] for e in L.down_of(2, facet)]
    nbr = {}
    for a, b in edges:
        nbr.setdefault(a, []).append(b)
        nbr.setdefault(b, []).append(a)
    start = min(nbr)
    out, prev, cur = [start], None, start
    while True:
        nxt = [x for x in nbr[cur] if x != prev]
        step = min(nxt) if prev is None else nxt[0]
        if step == start:
            return out
        out.append(step)
        prev, cur = cur, step


def _off(P: GeoPolytope) -> str:
    if P.lattice.rank != 3:
        raise ValueError("OFF export needs a 3-polytope")
    X = P.cartesian()
    c = X.mean(axis=0)
    L = P.lattice
    buf = io.StringIO()
    buf.write("OFF\n")
    buf.write(f"{L.f_vector[0]} {L.f_vector[2]} {L.f_vector[1]}\n")
    for row in X:
        buf.write(" ".join(f"{x:.12g}" for x in row) + "\n")
    for f in range(L.f_vector[2]):
        cyc = _cycle(L, f)
        # display orientation only: outward normal by right-hand rule
        a, b, e = X[cyc[0]], X[cyc[1]], X[cyc[2]]
        if np.dot(np.cross(b - a, e - b), a - c) < 0:
            cyc = cyc[::-1]
        buf.write(f"{len(cyc)} " + " ".join(str(v) for v in cyc) + "\n")
    return buf.getvalue()


def export(obj, fmt: str, name: str | None = None, k: int = 3) -> str:
    """Serialise a built object as ``json``, ``off`` or ``tsv`` text."""
    name = name or getattr(obj, "name", "")
    if fmt == "json":
        if isinstance(obj, PeriodicComplex):
            data = torus_quotient(obj, k).to_dict()
        else:
            data = obj.lattice.to_dict()
            data["coordinates"] = {
                "D": obj.D,
                "gram": [[_qstr(x) for x in row] for row in obj.gram.entries()],
                "vertices": [[_qstr(x) for x in row] for row in obj.vertices.entries()],
            }
            # vertex ids in "faces" refer to the rows above
        data["name"] = name
        return json.dumps(data, sort_keys=True) + "\n"
    if fmt == "off":
        if isinstance(obj, PeriodicComplex):
            raise ValueError("OFF export is for polytopes, not tilings")
        return _off(obj)
    if fmt == "tsv":
        return rows_to_tsv([census_row(name, obj, k)])
    raise ValueError(f"unsupported format {fmt!r}")


def analyze_dict(data: dict) -> dict:
    """Combinatorial report for a lattice read from the JSON schema."""
    L = FaceLattice.from_dict(data)
    ax = verify_axioms(L)
    out = {
        "name": data.get("name", ""),
        "rank": L.rank,
        "f_vector": list(L.f_vector),
        "axioms": {
            "bounded": ax.bounded,
            "flags_full": ax.flags_full,
            "strongly_connected": ax.strongly_connected,
            "diamond": ax.diamond,
        },
    }
    if not ax:
        out["witnesses"] = {k: str(v) for k, v in ax.witnesses.items()}
        return out
    Gam = combinatorial_automorphisms(L)
    out.update(
        {
            "flags": L.n_flags,
            "Gamma": Gam.order,
            "orbits_Gamma": flag_orbits(Gam).n_orbits,
            "transitivity_Gamma": list(face_orbit_counts(Gam)),
            "class_Gamma": str(orbit_class(L, Gam)),
        }
    )
    coords = data.get("coordinates")
    if coords:
        D = int(coords.get("D", 0))
        V = QArray.from_entries([[QNum.parse(x, D) for x in row] for row in coords["vertices"]], D)
        gram = QArray.from_entries([[QNum.parse(x, D) for x in row] for row in coords["gram"]], D)
        P = GeoPolytope(L, V, gram, out["name"], "json")
        G = geometric_symmetries(P)
        out.update(
            {
                "G": G.order,
                "orbits_G": flag_orbits(G).n_orbits,
                "transitivity": list(face_orbit_counts(G)),
                "class": str(orbit_class(L, G)),
            }
        )
    return out
