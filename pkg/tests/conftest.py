"""Acceptance reporting: one pass/fail line per criterion at session end.

Acceptance tests live in test_acceptance.py with names test_c<NN>_...; the
terminal summary aggregates their outcomes per criterion so the gate is
readable at a glance even under heavy parametrization.
"""

import re
from collections import defaultdict

_CRIT_RE = re.compile(r"test_acceptance\.py::test_(c\d\d)[a-z0-9_]*")

_LABELS = {
    "c01": "grid gp values are 4",
    "c02": "grid enumeration matches the closed form",
    "c03": "cylinder gp table",
    "c04": "torus exact values",
    "c05": "torus constructions certified",
    "c06": "Hamming two-factor tightness",
    "c07": "probability closed forms",
    "c08": "star formula discrepancy documented",
    "c09": "product rule for p",
    "c10": "sampler soundness",
    "c11": "checker equivalence",
    "c12": "bound sanity",
}

_outcomes: dict[str, list[bool]] = defaultdict(list)


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    m = _CRIT_RE.search(report.nodeid)
    if m:
        _outcomes[m.group(1)].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for crit in sorted(_outcomes):
        results = _outcomes[crit]
        word = "PASS" if all(results) else "FAIL"
        label = _LABELS.get(crit, crit)
        terminalreporter.write_line(
            f"ACCEPTANCE {crit} {label}: {word} ({sum(results)}/{len(results)} instances)"
        )
