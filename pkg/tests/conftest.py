import random

import pytest

ACCEPTANCE = {}


@pytest.fixture
def rng(request):
    # one stream per test, stable across runs and orderings
    return random.Random(request.node.nodeid)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = report.nodeid.split("::")[-1]
    if "test_acceptance.py" in report.nodeid and name.startswith("test_criterion_"):
        key = name.split("[")[0]
        prev = ACCEPTANCE.get(key, "PASS")
        ACCEPTANCE[key] = "PASS" if prev == "PASS" and report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        number, _, title = key[len("test_criterion_"):].partition("_")
        terminalreporter.write_line(f"criterion {int(number):2d} {title.replace('_', ' '):40s} {ACCEPTANCE[key]}")


