"""Shared fixtures and the acceptance summary printed at the end of a run."""

import pytest

from chduality.duality import VarietyContext
from chduality.ideal import Ideal
from chduality.poly import RingSpec

CORPUS_IDEALS = {
    "cusp": (("z", "w"), (2, 3), ["z^3 - w^2"]),
    "quadric3": (("z1", "z2", "z3"), (1, 1, 1), ["z1^2 + z2^2 + z3^2"]),
    "quadric4": (("z1", "z2", "z3", "z4"), (1, 1, 1, 1), ["z1^2 + z2^2 + z3^2 + z4^2"]),
    "surface": (
        ("z1", "z2", "z3", "z4"),
        (1, 2, 2, 3),
        ["z2*z3 - z1*z4", "z3^3 - z4^2", "z1*z3^2 - z2*z4", "z1^2*z3 - z2^2"],
    ),
}

_contexts = {}


def corpus_ideal(name: str) -> Ideal:
    variables, weights, gens = CORPUS_IDEALS[name]
    return Ideal.parse(RingSpec(variables, weights), gens, radical=True, pure=True)


def corpus_context(name: str) -> VarietyContext:
    if name not in _contexts:
        _contexts[name] = VarietyContext.from_ideal(corpus_ideal(name))
    return _contexts[name]


@pytest.fixture(params=sorted(CORPUS_IDEALS))
def corpus_name(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py" not in nodeid or rep.when != "call" and outcome != "error":
                continue
            label = dict(rep.user_properties).get("criterion", nodeid.split("::")[-1])
            lines.append((label, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for label, verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict}  {label}")
