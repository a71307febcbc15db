import re

_CRITERIA = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2))
    if report.when == "call" or report.outcome != "passed":
        if report.failed:
            _CRITERIA[key] = "FAIL"
        else:
            _CRITERIA.setdefault(key, "PASS" if report.when == "call" else report.outcome.upper())


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), status in sorted(_CRITERIA.items()):
        terminalreporter.write_line(f"criterion {num}: {status}  {name.replace('_', ' ')}")
