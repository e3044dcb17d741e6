import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")
    config.addinivalue_line("markers", "slow: long-running sweep")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    num, title = mark.args
    prev = _RESULTS.get(num, (title, True, []))
    notes = prev[2] + list(getattr(item, "_criterion_notes", []))
    _RESULTS[num] = (title, prev[1] and rep.passed, notes)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_RESULTS):
        title, ok, notes = _RESULTS[num]
        line = f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title}"
        if notes:
            line += "  [" + "; ".join(notes) + "]"
        terminalreporter.write_line(line)


@pytest.fixture
def note(request):
    """Attach a short value (e.g. an empirical constant) to the criterion line."""
    notes = []
    request.node._criterion_notes = notes
    return notes.append
