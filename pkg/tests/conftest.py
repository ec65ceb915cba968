"""Shared fixtures and the per-criterion PASS/FAIL summary."""
from __future__ import annotations

import pytest

from twoorbit import build_named

_OUTCOMES: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n = mark.args[0]
    prev = _OUTCOMES.get(n, {"ok": True, "title": mark.args[1] if len(mark.args) > 1 else "", "elapsed": None})
    if rep.when == "call" or rep.failed:
        prev["ok"] = prev["ok"] and rep.passed
        for key, value in item.user_properties:
            if key == "elapsed":
                prev["elapsed"] = value
    _OUTCOMES[n] = prev


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_OUTCOMES):
        o = _OUTCOMES[n]
        t = f" ({o['elapsed']:.2f} s)" if o["elapsed"] is not None else ""
        terminalreporter.write_line(f"{'PASS' if o['ok'] else 'FAIL'} criterion {n}: {o['title']}{t}")


@pytest.fixture(scope="session")
def cubocta():
    return build_named("cuboctahedron")


@pytest.fixture(scope="session")
def icosid():
    return build_named("icosidodecahedron")
