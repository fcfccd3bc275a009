"""Exact linear algebra: frozen examples plus structural properties."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitforge.errors import DimensionMismatch, MembershipError
from orbitforge.linalg import (Matrix, Subspace, annihilator, frac, image,
                               intersect, kernel, quotient_coords, signature,
                               solve, subspace_sum, vec)

from conftest import fractions, matrices, square_matrices


def S(ambient, *vectors):
    return Subspace.span(ambient, [vec(v) for v in vectors])


class TestFrozenExamples:
    def test_kernel_shift(self):
        # A(x, y) = (y, 0) by hand: kernel is the x-axis
        assert kernel(Matrix.from_rows([[0, 1], [0, 0]])) == S(2, (1, 0))

    def test_kernel_identity(self):
        assert kernel(Matrix.identity(2)).dim == 0

    def test_kernel_zero_map(self):
        assert kernel(Matrix.zeros(2, 2)) == Subspace.full(2)

    def test_image_shift(self):
        assert image(Matrix.from_rows([[0, 1], [0, 0]])) == S(2, (1, 0))

    def test_image_zero(self):
        assert image(Matrix.zeros(3, 3)).dim == 0

    def test_image_identity(self):
        assert image(Matrix.identity(3)) == Subspace.full(3)

    def test_intersect_planes(self):
        u = S(3, (1, 0, 0), (0, 1, 0))
        w = S(3, (0, 1, 0), (0, 0, 1))
        assert intersect(u, w) == S(3, (0, 1, 0))

    def test_intersect_self_and_zero(self):
        u = S(3, (1, 2, 0), (0, 0, 1))
        assert intersect(u, u) == u
        assert intersect(u, Subspace.zero(3)).dim == 0

    def test_annihilator_line(self):
        # functionals on Q^2 killing e1: computed from the transpose nullspace
        assert annihilator(S(2, (1, 0))) == S(2, (0, 1))

    def test_annihilator_extremes(self):
        assert annihilator(Subspace.zero(4)) == Subspace.full(4)
        assert annihilator(Subspace.full(4)).dim == 0

    def test_quotient_coords_plane_mod_line(self):
        u = Subspace.full(2)
        w = S(2, (1, 0))
        # elimination by hand: (3,5) = 3 e1 + 5 e2, class is 5 [e2]
        assert quotient_coords(u, w, vec((3, 5))) == (frac(5),)

    def test_quotient_coords_inside(self):
        u = Subspace.full(2)
        w = S(2, (1, 0))
        assert quotient_coords(u, w, vec((7, 0))) == (frac(0),)

    def test_quotient_coords_zero_w(self):
        u = Subspace.full(2)
        assert quotient_coords(u, Subspace.zero(2), vec((1, 2))) == vec((1, 2))

    def test_quotient_coords_membership_errors(self):
        u = S(3, (1, 0, 0))
        with pytest.raises(MembershipError):
            quotient_coords(u, Subspace.zero(3), vec((0, 1, 0)))

    def test_intersect_dim_mismatch(self):
        with pytest.raises(DimensionMismatch):
            intersect(S(2, (1, 0)), S(3, (1, 0, 0)))


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(square_matrices(4))
    def test_rank_nullity(self, a):
        assert kernel(a).dim + image(a).dim == a.cols

    @settings(max_examples=40, deadline=None)
    @given(matrices(3, 4))
    def test_kernel_vectors_annihilated(self, a):
        for b in kernel(a).basis_vectors():
            assert all(x == 0 for x in a.apply(b))

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.lists(fractions, min_size=3, max_size=3),
                    min_size=1, max_size=4))
    def test_canonical_form_is_spanning_invariant(self, gens):
        sub = Subspace.span(3, gens)
        # shuffle and rescale the generators: same canonical representation
        doubled = [tuple(2 * x for x in g) for g in reversed(gens)]
        assert Subspace.span(3, doubled + gens) == sub

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.lists(fractions, min_size=4, max_size=4),
                    min_size=0, max_size=3),
           st.lists(st.lists(fractions, min_size=4, max_size=4),
                    min_size=0, max_size=3))
    def test_modular_dimension_law(self, gu, gw):
        u, w = Subspace.span(4, gu), Subspace.span(4, gw)
        assert (subspace_sum(u, w).dim + intersect(u, w).dim
                == u.dim + w.dim)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.lists(fractions, min_size=4, max_size=4),
                    min_size=0, max_size=3))
    def test_double_annihilator(self, gens):
        u = Subspace.span(4, gens)
        assert annihilator(annihilator(u)) == u

    @settings(max_examples=40, deadline=None)
    @given(square_matrices(4))
    def test_solve_consistency(self, a):
        b = a.apply(tuple(Fraction(i + 1) for i in range(a.cols)))
        x = solve(a, b)
        assert x is not None and a.apply(x) == b


class TestMatrixBasics:
    def test_inverse_round_trip(self):
        m = Matrix.from_rows([[1, 2], [3, 5]])
        assert m @ m.inverse() == Matrix.identity(2)

    def test_det_singular(self):
        assert Matrix.from_rows([[1, 2], [2, 4]]).det() == 0

    def test_signature_diag(self):
        assert signature(Matrix.diagonal([1, 1, -1])) == (2, 1)

    def test_signature_offdiag(self):
        # hyperbolic plane: x y pairing has signature (1, 1)
        assert signature(Matrix.from_rows([[0, 1], [1, 0]])) == (1, 1)

    def test_signature_congruence_invariance(self):
        g = Matrix.diagonal([1, -1, -1])
        t = Matrix.from_rows([[1, 2, 0], [0, 1, 3], [1, 0, 1]])
        assert t.det() != 0
        assert signature(t.transpose() @ g @ t) == (1, 2)

    def test_json_round_trip(self):
        m = Matrix.from_rows([[frac("1/2"), 3], [0, frac("-7/3")]])
        assert Matrix.from_json(m.to_json()) == m

    def test_zero_dimensional(self):
        m = Matrix.zeros(0, 0)
        assert kernel(m).dim == 0
        assert m.det() == 1
