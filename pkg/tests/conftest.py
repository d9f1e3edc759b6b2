import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def distorted_element(rng, m, amp=0.15):
    """Reference lattice of a Q^m element on [0,1]^2 with jittered nodes."""
    from staghydro.basis import kinematic_basis

    ref = (kinematic_basis(m).nodes_2d + 1.0) / 2.0
    return ref + rng.uniform(-amp, amp, ref.shape) / m


# ---- acceptance reporting ----------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call" and not report.failed:
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, {"title": title, "ok": True, "notes": []})
    entry["ok"] &= report.passed
    for key, value in item.user_properties:
        if key == "detail":
            entry["notes"].append(value)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        c = _CRITERIA[number]
        status = "PASS" if c["ok"] else "FAIL"
        detail = "; ".join(c["notes"])
        terminalreporter.write_line(f"criterion {number}: {status}  {c['title']}" + (f"  [{detail}]" if detail else ""))
