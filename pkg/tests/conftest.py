import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

ACCEPTANCE = []


def record(name, passed, detail=""):
    """``passed`` is a bool, or the string "SKIP"."""
    status = passed if isinstance(passed, str) else ("PASS" if passed else "FAIL")
    ACCEPTANCE.append((name, status, detail))
    return passed


@pytest.fixture
def rng():
    return np.random.default_rng(20161)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{status}  {name}  {detail}")
