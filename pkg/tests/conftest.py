import re
from collections import defaultdict

import pytest

from e8galois import exactpoly as ep
from e8galois.chevalley import default_constants
from e8galois.groupelem import build_paper_element
from e8galois.rootsystem import build_e8_root_system

_CRITERIA: dict[int, list] = defaultdict(list)
_NODE = re.compile(r"test_acceptance\.py::test_c(\d+)_(\w+)")


@pytest.fixture(scope="session")
def rs():
    return build_e8_root_system()


@pytest.fixture(scope="session")
def sc():
    return default_constants()


@pytest.fixture(scope="session")
def paper_element():
    return build_paper_element()


@pytest.fixture(scope="session")
def paper_charpoly(paper_element):
    return ep.charpoly_exact(paper_element)


@pytest.fixture(scope="session")
def paper_poly(paper_charpoly):
    return ep.strip_unit_eigenvalue(paper_charpoly, 8)


def pytest_runtest_logreport(report):
    m = _NODE.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA[int(m.group(1))].append((m.group(2), report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(_CRITERIA):
        checks = _CRITERIA[c]
        failed = [name for name, outcome in checks if outcome != "passed"]
        status = "PASS" if not failed else "FAIL"
        detail = f"{len(checks)} checks" + (f"; failed: {', '.join(failed)}" if failed else "")
        terminalreporter.write_line(f"criterion {c:2d}: {status}  ({detail})")
