"""Rational polynomials and similarity invariants, with independent oracles."""

import itertools
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from orbitforge.linalg import Matrix
from orbitforge.qpoly import (QPoly, char_matrix, char_poly, invariant_factors,
                              poly_gcd, smith_invariant_factors)

from conftest import square_matrices

coeff_lists = st.lists(
    st.builds(Fraction, st.integers(-5, 5), st.integers(1, 3)),
    min_size=0, max_size=5)


@settings(max_examples=80, deadline=None)
@given(coeff_lists, coeff_lists)
def test_divmod_identity(ca, cb):
    a, b = QPoly.of(*ca), QPoly.of(*cb)
    if b.is_zero():
        return
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@settings(max_examples=60, deadline=None)
@given(coeff_lists, coeff_lists)
def test_gcd_divides_both(ca, cb):
    a, b = QPoly.of(*ca), QPoly.of(*cb)
    g = poly_gcd(a, b)
    if g.is_zero():
        assert a.is_zero() and b.is_zero()
    else:
        assert g.divides(a) and g.divides(b)


# --- independent oracle: determinantal divisors -------------------------------

def _minor_dets(mat, k):
    n = len(mat)
    for rows in itertools.combinations(range(n), k):
        for cols in itertools.combinations(range(n), k):
            yield _poly_det([[mat[i][j] for j in cols] for i in rows])


def _poly_det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    total = QPoly.zero()
    for j in range(n):
        if m[0][j].is_zero():
            continue
        sub = [[m[i][jj] for jj in range(n) if jj != j] for i in range(1, n)]
        term = m[0][j] * _poly_det(sub)
        total = total + (term if j % 2 == 0 else -term)
    return total


def determinantal_divisor_factors(a):
    """gcd of k x k minors of xI - a; quotients are the invariant factors."""
    cm = char_matrix(a)
    divisors = [QPoly.one()]
    for k in range(1, a.rows + 1):
        g = QPoly.zero()
        for d in _minor_dets(cm, k):
            g = poly_gcd(g, d)
        divisors.append(g)
    return tuple((divisors[k].divmod(divisors[k - 1])[0]).monic()
                 for k in range(1, a.rows + 1))


def test_invariant_factors_zero_matrix():
    facs = invariant_factors(Matrix.zeros(3, 3))
    assert facs == (QPoly.x(),) * 3


def test_invariant_factors_jordan_block():
    n2 = Matrix.from_rows([[0, 1], [0, 0]])
    assert invariant_factors(n2) == (QPoly.one(), QPoly.of(0, 0, 1))


def test_invariant_factors_distinct_diagonal():
    m = Matrix.diagonal([1, 2])
    expect = QPoly.of(2, -3, 1)  # (x - 1)(x - 2)
    assert invariant_factors(m) == (QPoly.one(), expect)


@settings(max_examples=25, deadline=None)
@given(square_matrices(3))
def test_invariant_factors_match_minor_oracle(a):
    assert invariant_factors(a) == determinantal_divisor_factors(a)


@settings(max_examples=25, deadline=None)
@given(square_matrices(4))
def test_factors_multiply_to_newton_charpoly(a):
    prod = QPoly.one()
    for f in invariant_factors(a):
        prod = prod * f
    assert prod == char_poly(a).monic()


@settings(max_examples=25, deadline=None)
@given(square_matrices(3))
def test_divisibility_chain(a):
    facs = invariant_factors(a)
    for f, g in zip(facs, facs[1:]):
        assert f.divides(g)
