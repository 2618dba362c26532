from __future__ import annotations

import re

import pytest

from qci.modrep import quotient, radical, regular_module, simple_module, socle
from qci.qalgebra import AlgebraConfig, build_algebra


def algebra(c: int, a: int, p: int | None = None):
    return build_algebra(AlgebraConfig.homogeneous(c, a, p=p))


@pytest.fixture(scope="session")
def A22():
    return algebra(2, 2)


@pytest.fixture(scope="session")
def A32():
    """a = 3, c = 2 at the default prime."""
    return algebra(2, 3)


@pytest.fixture(scope="session")
def A23():
    """a = 2, c = 3 (exterior algebra on three generators)."""
    return algebra(3, 2)


@pytest.fixture(scope="session")
def A22_5():
    return algebra(2, 2, 5)


@pytest.fixture(scope="session")
def A32_7():
    return algebra(2, 3, 7)


def standard_modules(A):
    R = regular_module(A)
    rad = radical(R).as_module()[0]
    return {
        "k": simple_module(A),
        "A": R,
        "radA": rad,
        "AmodSoc": quotient(R, socle(R))[0],
        "radsoc": quotient(rad, socle(rad))[0],
    }


# ---------------------------------------------------------------------------
# one pass/fail line per acceptance criterion in the terminal summary

_CRITERION = re.compile(r"test_acceptance\.py::test_c(\d\d)_")
_outcomes: dict[str, list[str]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        outcome = "xfail" if hasattr(report, "wasxfail") and report.outcome == "skipped" else report.outcome
        _outcomes.setdefault(f"C{m.group(1)}", []).append(outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    from qci.verify import CLAIMS

    terminalreporter.section("acceptance criteria")
    for cid in sorted(_outcomes):
        res = _outcomes[cid]
        if any(r == "failed" for r in res):
            status = "FAIL"
        elif "xfail" in res:
            status = "XFAIL"  # literal statement fails on a known case, recorded as expected
        else:
            status = "PASS"
        extra = f", {res.count('xfail')} expected failure" if "xfail" in res else ""
        terminalreporter.write_line(f"{cid} {status}  {CLAIMS[cid]}  [{res.count('passed')} passed{extra}]")
