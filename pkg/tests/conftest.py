import os
import tempfile

# Oracle tables go to one throwaway directory per session; set before any
# vankampen import reads it.
_CACHE = tempfile.mkdtemp(prefix="vk-oracle-")
os.environ.setdefault("VK_CACHE_DIR", _CACHE)

import pytest

from vankampen.gallery import a3, grid, square, z2
from vankampen.oracle import Oracle, SearchBudget


@pytest.fixture(scope="session")
def Z2():
    return z2()


@pytest.fixture(scope="session")
def A3():
    return a3()


@pytest.fixture
def S1():
    return square()


@pytest.fixture
def rect():
    return grid(2, 1)


@pytest.fixture(scope="session")
def z2_oracle(Z2):
    return Oracle(Z2, SearchBudget(4))


@pytest.fixture(scope="session")
def corpus(Z2, A3):
    """Every filling with at most 4 faces of the Z^2 words of length <= 4 and
    the <a | a^3> words of length <= 6."""
    out = []
    for p, n in ((Z2, 4), (A3, 6)):
        o = Oracle(p, SearchBudget(4))
        for w in o.words_up_to(n):
            out += o.fillings(w).diagrams
    return out


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
