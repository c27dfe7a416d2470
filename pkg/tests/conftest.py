import contextlib
import time

import pytest

_acceptance_lines = []


@pytest.fixture(scope="session")
def criterion():
    @contextlib.contextmanager
    def record(label, title):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            took = time.perf_counter() - start
            line = f"{label} {'PASS' if ok else 'FAIL'}  {title}  ({took:.2f}s)"
            _acceptance_lines.append(line)
            print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
