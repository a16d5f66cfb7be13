import sys
from collections import defaultdict
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[int, dict] = defaultdict(lambda: {"title": "", "outcomes": []})


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, title): acceptance criterion k")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        entry = _criteria[mark.args[0]]
        entry["title"] = mark.args[1]
        entry["outcomes"].append((item.name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        entry = _criteria[k]
        ok = all(o == "passed" for _, o in entry["outcomes"])
        line = f"CRITERION {k:>2} {'PASS' if ok else 'FAIL'}  {entry['title']}"
        failed = [name for name, o in entry["outcomes"] if o != "passed"]
        if failed:
            line += f"  (failed: {', '.join(failed)})"
        terminalreporter.write_line(line)
