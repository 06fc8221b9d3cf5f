"""Shared fixtures: the small worked families used across the suite."""
from fractions import Fraction as Q

import pytest
from hypothesis import HealthCheck, settings

from supcalc.family import FunctionFamily
from supcalc.functions import PolyhedralFunction
from supcalc.polyhedron import Polyhedron
from supcalc.rationals import qv

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

PF = PolyhedralFunction.make


def abs_family() -> FunctionFamily:
    # sup{x, -x} = |x|
    return FunctionFamily.make(
        [("p", PF(1, [(qv(1), Q(0))])), ("m", PF(1, [(qv(-1), Q(0))]))]
    )


def slope_chain(top: int) -> FunctionFamily:
    """Members (1 - 1/n)|x| for n = 2..top, chained in increasing order."""
    members = [
        (f"n{n}", PF(1, [(qv(Q(n - 1, n)), Q(0)), (qv(Q(1 - n, n)), Q(0))]))
        for n in range(2, top + 1)
    ]
    edges = [(f"n{n}", f"n{n + 1}") for n in range(2, top)]
    return FunctionFamily.make(members, order_edges=edges, increasing=True)


def kink_function() -> PolyhedralFunction:
    # max(x, 2x - 1) restricted to [0, 5]
    return PF(1, [(qv(1), Q(0)), (qv(2), Q(-1))], Polyhedron.box(qv(0), qv(5)))


# Acceptance tests drop short notes here (rates, counts); the terminal
# summary below prints one verdict line per criterion either way.
acceptance_notes: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in nodeid:
                name = nodeid.split("::")[-1]
                verdict = "pass" if outcome == "passed" else "fail"
                rows.append((name, verdict))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict in sorted(rows):
        note = acceptance_notes.get(name)
        suffix = f" ({note})" if note else ""
        terminalreporter.write_line(f"{name}: {verdict}{suffix}")


@pytest.fixture
def fam_abs() -> FunctionFamily:
    return abs_family()


@pytest.fixture
def chain6() -> FunctionFamily:
    return slope_chain(6)


@pytest.fixture
def f_kink() -> PolyhedralFunction:
    return kink_function()
