import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_CRITERIA: dict[int, list[bool]] = {}
_NOTES: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): acceptance criterion number n")


@pytest.fixture
def acceptance_log(request):
    """Append a note that is printed next to the criterion in the summary."""
    marker = request.node.get_closest_marker("acceptance")
    num = marker.args[0] if marker else 0

    def log(msg):
        _NOTES.setdefault(num, []).append(str(msg))
    return log


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = item.get_closest_marker("acceptance")
    if m is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _CRITERIA.setdefault(m.args[0], []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        results = _CRITERIA[num]
        status = "PASS" if all(results) else "FAIL"
        tr.write_line(f"criterion {num:2d}: {status} ({sum(results)}/{len(results)} tests)")
        for note in _NOTES.get(num, []):
            tr.write_line(f"    {note}")
