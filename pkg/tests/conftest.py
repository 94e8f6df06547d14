import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or not marker.args:
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "passed": True, "measured": []})
    if rep.failed or (rep.when == "call" and rep.skipped):
        entry["passed"] = False
    if rep.when == "call":
        entry["measured"] += [f"{k}={v:.3g}" if isinstance(v, float) else f"{k}={v}"
                              for k, v in item.user_properties]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["passed"] else "FAIL"
        detail = ", ".join(entry["measured"])
        terminalreporter.write_line(f"AC-{number:<2d} {status}  {entry['title']}  [{detail}]")
