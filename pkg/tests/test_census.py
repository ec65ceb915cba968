from __future__ import annotations

import copy
import json

import pytest

from twoorbit import OutOfScope, build_named, census_names, census_row, demicube_check, export, run_census, verify_theorems
from twoorbit.census import REGISTRY, SNUB_24_CELL, analyze_dict, load_golden, rows_to_tsv, theorem_checks
from twoorbit.cli import main

# published counts, restated here independently of the golden file
LITERATURE = {
    "cuboctahedron": {"flags": 96, "G": 48, "orbits_G": 2},
    "icosidodecahedron": {"flags": 240, "G": 120, "orbits_G": 2},
    "rhombic_dodecahedron": {"flags": 96, "G": 48, "orbits_G": 2},
    "rhombic_triacontahedron": {"flags": 240, "G": 120, "orbits_G": 2},
    "rectified_4_simplex": {"flags": 360, "G": 120, "orbits_G": 3},
    "rectified_600_cell": {"flags": 43200, "G": 14400, "orbits_G": 3},
    "24_cell": {"flags": 1152, "G": 1152, "orbits_G": 1},
    "600_cell": {"flags": 14400, "G": 14400, "orbits_G": 1},
}

SMALL = ["cube", "cuboctahedron", "rhombic_dodecahedron", "edge_alt_4gon", "angle_alt_6gon",
         "regular_8gon", "demicube_4", "square", "rhombus", "trihexagonal", "apeirogon_alt"]


@pytest.fixture(scope="module")
def golden():
    return load_golden()


def test_golden_covers_registry(golden):
    assert set(golden["rows"]) == set(census_names(include_large=True))
    assert golden["out_of_scope"]["snub_24_cell"]["flags"] == SNUB_24_CELL["flags"]


@pytest.mark.parametrize("name", sorted(LITERATURE))
def test_golden_agrees_with_literature(golden, name):
    row = golden["rows"][name]
    for key, value in LITERATURE[name].items():
        assert row[key] == value
        assert row["basis"][key] in ("literature", "computed", "by-definition")


@pytest.mark.parametrize("name", SMALL)
def test_rows_match_golden(golden, name):
    row = census_row(name)
    want = golden["rows"][name]
    for key in ("f_vector", "flags", "G", "Gamma", "orbits_G", "orbits_Gamma", "transitivity", "class"):
        assert row[key] == want[key], key


def test_snub_is_documented_not_built():
    with pytest.raises(OutOfScope) as info:
        build_named("snub_24_cell")
    assert info.value.oracle == {"flags": 5760, "order": 576, "orbits": 10}
    assert "snub_24_cell" not in census_names()


def test_unknown_name():
    with pytest.raises(KeyError):
        build_named("great_dodecahedron")


def test_parametric_builders():
    P = build_named("edge_alt_6gon", lam=3)
    assert census_row("edge_alt_6gon", P)["G"] == 6
    T = build_named("rectangle", ratio=3)
    assert census_row("rectangle", T)["orbits_G"] == 2
    with pytest.raises(TypeError):
        build_named("cube", lam=2)


def test_demicube_report():
    rep = demicube_check(4)
    assert rep["flags"] == 384
    assert rep["complement_pairing"]


def test_tsv_is_deterministic():
    rows = run_census(["cube", "rhombus"])
    a, b = rows_to_tsv(rows), rows_to_tsv(run_census(["cube", "rhombus"]))
    assert a == b
    header, *lines = a.strip().split("\n")
    assert header.split("\t")[0] == "name" and len(lines) == 2


def test_verify_small_subset_passes():
    for name in ["cuboctahedron", "rhombille", "rectangle"]:
        res = verify_theorems(only=name)
        assert res.status == 0, res.report
        assert res.report.startswith("PASS")


def test_verify_reports_mismatch(golden):
    bad = copy.deepcopy(golden)
    bad["rows"]["cuboctahedron"]["G"] = 24
    res = verify_theorems(only="cuboctahedron", golden=bad)
    assert res.status == 1 and res.report.startswith("FAIL")


def test_verify_reports_construction_failure(golden):
    bad = copy.deepcopy(golden)
    bad["rows"]["snub_24_cell"] = {"flags": 5760}
    res = verify_theorems(only="snub_24_cell", golden=bad)
    assert res.status == 2 and res.report.startswith("ERROR")


def test_theorem_checks_on_full_census(golden):
    rows = [dict(name=n, **r) for n, r in golden["rows"].items()]
    checks = theorem_checks(rows)
    assert len(checks) == 6
    assert all(c["ok"] for c in checks), [c for c in checks if not c["ok"]]


def test_theorem_checks_catch_a_bad_row(golden):
    rows = [dict(name=n, **r) for n, r in golden["rows"].items()]
    for r in rows:
        if r["name"] == "tesseract":
            r["orbits_G"] = 2
            r["class"] = "2_{0,1,3}"
    assert not all(c["ok"] for c in theorem_checks(rows))


def test_json_export_roundtrip():
    text = export(build_named("cuboctahedron"), "json", "cuboctahedron")
    rep = analyze_dict(json.loads(text))
    assert rep["flags"] == 96 and rep["Gamma"] == 48
    assert rep["G"] == 48 and rep["class"] == "2_{0,1}"


def test_json_export_with_negative_irrational_coordinates():
    text = export(build_named("rhombic_triacontahedron"), "json")
    rep = analyze_dict(json.loads(text))
    assert rep["G"] == 120 and rep["class"] == "2_{1,2}"


def test_analyze_reports_broken_lattice():
    data = {"rank": 2, "faces": [[0, [0]], [0, [1]], [0, [2]], [1, [0, 1]], [1, [1, 2]]],
            "incidence": [[0, 3], [1, 3], [1, 4], [2, 4]]}
    rep = analyze_dict(data)
    assert not rep["axioms"]["diamond"] and "witnesses" in rep


def test_off_export():
    text = export(build_named("cube"), "off")
    lines = text.strip().split("\n")
    assert lines[0] == "OFF"
    assert lines[1].split()[:2] == ["8", "6"]
    faces = [l.split() for l in lines[2 + 8:]]
    assert all(f[0] == "4" for f in faces)
    with pytest.raises(ValueError):
        export(build_named("square"), "off")


def test_registry_names_build():
    for name in REGISTRY:
        if name in ("snub_24_cell", "rectified_600_cell", "600_cell", "120_cell"):
            continue
        build_named(name)


# -- command line ---------------------------------------------------------

def test_cli_verify_one(capsys):
    assert main(["verify", "--only", "cuboctahedron"]) == 0
    assert capsys.readouterr().out.startswith("PASS cuboctahedron")


def test_cli_rejects_small_k(capsys):
    assert main(["--quotient-k", "2", "verify", "--only", "square"]) == 2


def test_cli_export_and_analyze(tmp_path, capsys):
    out = tmp_path / "rd.json"
    assert main(["export", "rhombic_dodecahedron", "--format", "json", "-o", str(out)]) == 0
    assert main(["analyze", str(out)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["G"] == 48 and rep["transitivity"] == [2, 1, 1]


def test_cli_export_out_of_scope(capsys):
    assert main(["export", "snub_24_cell", "--format", "json"]) == 2
    assert "5760" in capsys.readouterr().err


def test_cli_unknown_object(capsys):
    assert main(["export", "nothing", "--format", "tsv"]) == 2


def test_cli_tsv_export(capsys):
    assert main(["export", "trihexagonal", "--format", "tsv"]) == 0
    out = capsys.readouterr().out.strip().split("\n")
    assert out[1].startswith("trihexagonal\t2\t")


def test_cli_census_json(capsys):
    assert main(["census", "--skip-large", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert {r["name"] for r in rows} >= {"cuboctahedron", "tet_oct"}
    assert "600_cell" not in {r["name"] for r in rows}


def test_full_verify_sweep():
    res = verify_theorems()
    assert res.status == 0, [l for l in res.report.split("\n") if not l.startswith("PASS")]
    assert len(res.rows) == len(census_names(include_large=True))
