import numpy as np
import pytest
from hypothesis import strategies as st

from synchro.transducer import Transducer, parse

SHIFT_TDX = """\
# shift map on two letters
alphabet 2
states a1 a2
a1 0 0 a1
a1 1 0 a2
a2 0 1 a1
a2 1 1 a2
"""

ONEWAY_TDX = """\
alphabet 2
states a1 a2
a1 0 1 a1
a1 1 0 a2
a2 0 0 a1
a2 1 1 a2
"""

# the three-letter example exactly as drawn; its two states turn out to be clones
H3_AS_DRAWN_TDX = """\
alphabet 3
states b a
b 0 0 b
b 1 2 a
b 2 1 b
a 0 0 b
a 1 2 a
a 2 1 b
"""


@pytest.fixture
def shift():
    return parse(SHIFT_TDX)


@pytest.fixture
def oneway():
    return parse(ONEWAY_TDX)


def with_dangling(T: Transducer) -> Transducer:
    """Add a state ``d`` that copies its input and moves into state 0."""
    delta = np.vstack([T.delta, np.zeros((1, T.n), dtype=np.int64)])
    out = np.vstack([T.out, np.arange(T.n)[None, :]])
    return Transducer(T.n, T.states + ("d",), delta, out)


@st.composite
def machines(draw, max_states=4, max_n=3, min_n=2):
    n = draw(st.integers(min_n, max_n))
    size = draw(st.integers(1, max_states))
    cells = st.lists(st.integers(0, size - 1), min_size=n, max_size=n)
    delta = draw(st.lists(cells, min_size=size, max_size=size))
    letters = st.lists(st.integers(0, n - 1), min_size=n, max_size=n)
    out = draw(st.lists(letters, min_size=size, max_size=size))
    return Transducer(n, tuple(f"q{i}" for i in range(size)), np.array(delta), np.array(out))


@st.composite
def invertible_machines(draw, max_states=4, max_n=3):
    n = draw(st.integers(2, max_n))
    size = draw(st.integers(1, max_states))
    cells = st.lists(st.integers(0, size - 1), min_size=n, max_size=n)
    delta = draw(st.lists(cells, min_size=size, max_size=size))
    out = draw(st.lists(st.permutations(range(n)), min_size=size, max_size=size))
    return Transducer(n, tuple(f"q{i}" for i in range(size)), np.array(delta), np.array(out))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
