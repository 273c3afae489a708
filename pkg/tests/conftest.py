from contextlib import contextmanager

import pytest

from qmcanneal import _backend

BACKENDS = ["python"] + (["cython"] if _backend.NAME == "cython" else [])

ACCEPTANCE_LINES = []


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@contextmanager
def criterion(number, title):
    """Record one pass/fail line for an acceptance criterion."""
    info = {"detail": ""}
    try:
        yield info
    except BaseException as exc:
        msg = str(exc).splitlines()[0] if str(exc) else ""
        line = "ACCEPTANCE %2d FAIL  %s -- %s: %s" % (number, title, type(exc).__name__, msg[:160])
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    line = "ACCEPTANCE %2d PASS  %s -- %s" % (number, title, info["detail"])
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
