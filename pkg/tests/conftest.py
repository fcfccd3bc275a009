from fractions import Fraction

import pytest
from hypothesis import strategies as st

from orbitforge.linalg import Matrix


fractions = st.builds(Fraction,
                      st.integers(min_value=-6, max_value=6),
                      st.integers(min_value=1, max_value=4))


def matrices(rows, cols):
    return st.lists(
        st.lists(fractions, min_size=cols, max_size=cols),
        min_size=rows, max_size=rows).map(Matrix.from_rows)


def square_matrices(max_n=4):
    return st.integers(min_value=1, max_value=max_n).flatmap(
        lambda n: matrices(n, n))


@pytest.fixture
def rng():
    import random
    return random.Random(12345)
