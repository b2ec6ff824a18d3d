"""Shared pytest plumbing: the acceptance checklist summary.

Tests tagged with @pytest.mark.acceptance(num, title) get one line each in
a terminal summary section, so the checklist status is readable at a
glance regardless of how verbose the main run was.
"""

_CHECKLIST = {}  # nodeid -> (num, title)
_OUTCOMES = {}  # nodeid -> "PASS" | "FAIL" | "SKIP" | "ERROR"


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(num, title): entry in the acceptance checklist summary",
    )


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            _CHECKLIST[item.nodeid] = (str(mark.args[0]), str(mark.args[1]))


def pytest_runtest_logreport(report):
    if report.nodeid not in _CHECKLIST:
        return
    if report.when == "call":
        _OUTCOMES[report.nodeid] = "PASS" if report.passed else "FAIL"
    elif report.when == "setup":
        if report.skipped:
            _OUTCOMES[report.nodeid] = "SKIP"
        elif report.failed:
            _OUTCOMES[report.nodeid] = "ERROR"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    seen = [(num, title, _OUTCOMES.get(nodeid, "----"))
            for nodeid, (num, title) in _CHECKLIST.items()
            if nodeid in _OUTCOMES]
    if not seen:
        return
    terminalreporter.section("acceptance checklist")
    for num, title, outcome in sorted(seen):
        terminalreporter.write_line(f"{outcome}  {num}  {title}")
