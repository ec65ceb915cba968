"""Exact polytopes and tilings, their symmetry groups, and flag orbits.

Quick tour::

    >>> from twoorbit import build_named, census_row
    >>> census_row("cuboctahedron")["class"]
    '2_{0,1}'
"""
from .exact import PHI, FieldMismatchError, QArray, QNum, qnum_arith, qnum_sign
from .lattice import (
    AxiomReport,
    FaceLattice,
    adjacent_flag,
    dual_lattice,
    flags,
    is_isomorphic,
    lattice_from_vertex_facet,
    section,
    verify_axioms,
)
from .geometry import DegenerateError, GeoPolytope, polar_dual, rectify
from .coxeter import ReflectionGroup, enumerate_group, reflection_generators, regular_polytope
from .symmetry import (
    ClassSymbol,
    OrbitPartition,
    PermGroup,
    chain_orbits,
    combinatorial_automorphisms,
    face_orbit_counts,
    flag_orbits,
    geometric_symmetries,
    orbit_class,
    quasiregular_check,
    restricted_subgroup,
    section_regularity_audit,
)
from .tiling import (
    PeriodicComplex,
    TorusQuotient,
    build_tiling,
    dihedral_angle_cos,
    dihedral_angle_cosines,
    quotient_symmetries,
    tiling_orbit_report,
    torus_quotient,
    turn_fraction,
)
from .census import (
    OutOfScope,
    build_named,
    census_names,
    census_row,
    demicube_check,
    export,
    polygon_two_orbit,
    run_census,
    verify_theorems,
)

__version__ = "0.1.0"
