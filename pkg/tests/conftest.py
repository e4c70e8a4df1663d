import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from symremoval import kernels  # noqa: E402

BACKENDS = ["numpy"] + (["numba"] if kernels.BACKEND == "numba" else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


ACCEPTANCE_RESULTS = []


def record(criterion, ok, detail=""):
    ACCEPTANCE_RESULTS.append((criterion, ok, detail))
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {criterion}  {detail}")
