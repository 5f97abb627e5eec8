import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tenscanon import Canonicalizer, parse_declarations, parse_polynomial  # noqa: E402
from tenscanon.relspace import SpaceCache  # noqa: E402

RIEMANN_TD = """
tensor Ri(4) { asym(1,2); asym(3,4); sym_pair((1,2),(3,4)); cyclic3(2,3,4); }
tensor Ric(2) { sym(1,2); }
tensor g(2) { sym(1,2); }
tensor A(2) { asym(1,2); }
tensor T(2) { }
tensor V(1) { }
"""


@pytest.fixture(scope="session")
def decls():
    return parse_declarations(RIEMANN_TD)


@pytest.fixture
def engine():
    return Canonicalizer(SpaceCache())


@pytest.fixture
def P(decls):
    return lambda text: parse_polynomial(text, decls)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
