"""Suite-wide hooks.

Every converged operating point produced anywhere in the suite is checked
for state consistency by a solver observer; the acceptance test for that
property runs last and asserts on what was collected.  Acceptance tests
carry ``@pytest.mark.acceptance(n, title)`` and are summarized as one
PASS/FAIL line each at the end of the run.
"""
from __future__ import annotations

import pytest

from jjlogic.solver import add_observer, state_violations


class _StateAudit:
    def __init__(self):
        self.checked = 0
        self.violations = []
        self.worst_residual = 0.0

    def __call__(self, circuit, sol):
        if not sol.converged:
            return
        self.checked += 1
        self.worst_residual = max(self.worst_residual, sol.residual)
        bad = state_violations(circuit, sol)
        if bad:
            self.violations.append((bad, dict(sol.device_states)))


AUDIT = _StateAudit()
add_observer(AUDIT)

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")
    config.addinivalue_line("markers", "run_last: run after every other test")


def pytest_collection_modifyitems(config, items):
    items.sort(key=lambda it: it.get_closest_marker("run_last") is not None)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        prev = _RESULTS.get(number, (title, True))[1]
        _RESULTS[number] = (title, prev and rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok = _RESULTS[number]
        terminalreporter.write_line(f"ACCEPTANCE {number:2d} {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture
def audit():
    return AUDIT
