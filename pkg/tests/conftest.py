import time
from contextlib import contextmanager

import pytest

_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Context manager recording one PASS/FAIL line per acceptance criterion."""

    @contextmanager
    def run(number, text):
        start = time.perf_counter()
        try:
            yield
        except BaseException:
            _ACCEPTANCE.append((number, "FAIL", text, time.perf_counter() - start))
            raise
        _ACCEPTANCE.append((number, "PASS", text, time.perf_counter() - start))

    return run


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, text, secs in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"[{status}] criterion {number}: {text} ({secs:.2f} s)")
