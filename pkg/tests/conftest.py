import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_labels: dict[str, str] = {}
_results: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): gate criterion reported in the acceptance summary")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            _labels[item.nodeid] = mark.args[0]


def pytest_runtest_logreport(report):
    label = _labels.get(report.nodeid)
    if label is None:
        return
    if report.failed:
        _results[label] = "FAIL"
    elif report.when == "call" and report.passed:
        _results.setdefault(label, "PASS")
    elif report.skipped:
        _results.setdefault(label, "SKIP")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for label in dict.fromkeys(_labels.values()):
        if label in _results:
            terminalreporter.write_line(f"{_results[label]}  {label}")
