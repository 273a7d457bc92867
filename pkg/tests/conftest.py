import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

# criterion number -> [title, outcomes of the tests marked with it]
_criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _criteria.setdefault(number, [title, []])
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        entry[1].append("skipped" if rep.skipped else "passed" if rep.passed else "failed")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, outcomes = _criteria[number]
        ok = bool(outcomes) and all(o == "passed" for o in outcomes)
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
