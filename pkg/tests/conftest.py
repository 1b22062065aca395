from collections import OrderedDict

import pytest

_CRITERIA = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title, limit_s): acceptance criterion with a runtime limit")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title, limit = mark.args
    entry = _CRITERIA.setdefault(num, {"title": title, "limit": limit, "time": 0.0, "failed": [], "xfail": [], "n": 0})
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        entry["n"] += 1
        entry["time"] += rep.duration
        if hasattr(rep, "wasxfail"):
            entry["xfail"].append(item.name)
        elif rep.failed:
            entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        e = _CRITERIA[num]
        ok = not e["failed"] and e["time"] <= e["limit"]
        line = f"criterion {num} [{e['title']}]: {'PASS' if ok else 'FAIL'} ({e['n']} checks, {e['time']:.1f}s of {e['limit']}s)"
        if e["failed"]:
            line += " failed: " + ", ".join(e["failed"])
        if e["xfail"]:
            line += " expected-fail: " + ", ".join(e["xfail"])
        terminalreporter.write_line(line)
