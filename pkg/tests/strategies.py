"""Hypothesis strategies shared by the tests."""

from hypothesis import strategies as st

from triqmc.bitcore import IndexMatrix


@st.composite
def index_matrices(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    return IndexMatrix.from_code(draw(st.integers(0, 4**n - 1)), n)


PAIR = st.sampled_from([(0, 0), (1, 0), (0, 1), (1, 1)])
NONZERO_PAIR = st.sampled_from([(1, 0), (0, 1), (1, 1)])
