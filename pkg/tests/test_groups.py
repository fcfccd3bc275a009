"""Semidirect-product actions: worked examples and exact identities."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitforge.errors import InvariantViolation
from orbitforge.groups import (AlgebraElement, DualAlgebraElement,
                               GroupElement, GroupKind, adjoint_act, affine,
                               coadjoint_act, full_pairing, little_algebra,
                               mu, poincare, project_to_pi, project_to_sigma,
                               vector_orbit_class)
from orbitforge.linalg import Matrix, Subspace, dot, frac, vec
from orbitforge.verify import Sampler


A1 = affine(1)
P11 = poincare(1, 1)
X = Matrix.from_rows([[0, 1], [1, 0]])


def aff1_group(r, d):
    return GroupElement(A1, Matrix.from_rows([[r]]), vec([d]))


class TestWorkedExamples:
    def test_adjoint_line(self):
        # (r, d) = (2, 3) on (omega, v) = (1, 5): (1, 2*5 - 1*3) = (1, 7)
        out = adjoint_act(aff1_group(2, 3), AlgebraElement(A1, Matrix.from_rows([[1]]), vec([5])))
        assert out.omega == Matrix.from_rows([[1]]) and out.v == vec([7])

    def test_coadjoint_line(self):
        # (2, 3) on (L, p) = (1, 4): (1 + 4/2*3, 4/2) = (7, 2)
        out = coadjoint_act(aff1_group(2, 3), DualAlgebraElement(A1, Matrix.from_rows([[1]]), vec([4])))
        assert out.L == Matrix.from_rows([[7]]) and out.p == vec([2])

    def test_identity_acts_trivially(self):
        g = GroupElement.identity(P11)
        x = AlgebraElement(P11, X.scale(2), vec([1, -1]))
        xi = DualAlgebraElement(P11, X.scale(-1), vec([0, 3]))
        assert adjoint_act(g, x) == x
        assert coadjoint_act(g, xi) == xi

    def test_zero_omega_adjoint(self):
        g = aff1_group(3, 7)
        out = adjoint_act(g, AlgebraElement(A1, Matrix.zeros(1, 1), vec([2])))
        assert out.omega.is_zero() and out.v == vec([6])

    def test_zero_p_coadjoint(self):
        g = aff1_group(5, 9)
        out = coadjoint_act(g, DualAlgebraElement(A1, Matrix.from_rows([[4]]), vec([0])))
        assert out.p == vec([0]) and out.L == Matrix.from_rows([[4]])


class TestGroupElementValidation:
    def test_singular_rejected(self):
        with pytest.raises(InvariantViolation):
            GroupElement(A1, Matrix.zeros(1, 1), vec([0]))

    def test_non_isometry_rejected(self):
        with pytest.raises(InvariantViolation):
            GroupElement(P11, Matrix.from_rows([[2, 0], [0, 1]]), vec([0, 0]))

    def test_reflection_accepted(self):
        GroupElement(P11, Matrix.diagonal([1, -1]), vec([0, 0]))

    def test_non_skew_adjoint_algebra_rejected(self):
        with pytest.raises(InvariantViolation):
            AlgebraElement(P11, Matrix.identity(2), vec([0, 0]))


class TestMu:
    def test_published_formula_relationship(self):
        # the self-dual identification used in worked examples gives
        # (p v^T - v p^T) Q; it equals -2 mu(Q p, v)^T in these coordinates
        q = P11.form()
        for p_ex, v in [((2, 3), (5, -1)), ((1, 0), (0, 1)), ((1, 1), (2, 5))]:
            p_ex, v = vec(p_ex), vec(v)
            outer = Matrix.from_rows([[p_ex[i] * v[j] for j in range(2)] for i in range(2)])
            formula = (outer - outer.transpose()) @ q
            assert formula == mu(q.apply(p_ex), v, P11).transpose().scale(-2)

    def test_antisymmetry_on_identified_vector(self):
        q = P11.form()
        p = vec([3, 5])
        assert mu(q.apply(p), p, P11).is_zero()

    @settings(max_examples=40, deadline=None)
    @given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4),
           st.integers(-4, 4), st.integers(-3, 3))
    def test_defining_pairing_identity(self, p1, p2, v1, v2, a):
        p, v, w = vec([p1, p2]), vec([v1, v2]), X.scale(a)
        assert (mu(p, v, P11).transpose() @ w).trace() == dot(p, w.apply(v))

    def test_affine_mu_is_outer_product(self):
        kind = affine(2)
        p, v = vec([1, 2]), vec([3, 4])
        assert mu(p, v, kind) == Matrix.from_rows([[3, 4], [6, 8]])


class TestLittleAlgebra:
    def test_affine_zero_p_is_everything(self):
        assert little_algebra(vec([0, 0]), affine(2)).dim == 4

    def test_affine_e2_star(self):
        sub = little_algebra(vec([0, 1]), affine(2))
        assert sub.dim == 2
        for b in sub.basis_vectors():
            m = Matrix.unflatten(b, 2, 2)
            assert m.row(1) == vec([0, 0])  # bottom row vanishes

    def test_poincare_null_vector_is_trivial(self):
        # the stabilizer algebra of a nonzero isotropic vector in the 1+1
        # case is zero dimensional (the boost scales every null ray)
        assert little_algebra(vec([1, 1]), P11).dim == 0

    def test_poincare13_dimensions(self):
        p13 = poincare(1, 3)
        assert little_algebra(vec([0, 0, 0, 0]), p13).dim == 6
        assert little_algebra(vec([1, 0, 0, 0]), p13).dim == 3   # definite rest
        assert little_algebra(vec([0, 1, 0, 0]), p13).dim == 3   # sig (1,2) rest
        assert little_algebra(vec([1, 1, 0, 0]), p13).dim == 3   # euclidean type


class TestProjections:
    def test_sigma_zero_omega(self):
        x = AlgebraElement(affine(2), Matrix.zeros(2, 2), vec([3, 4]))
        sp = project_to_sigma(x)
        assert sp.kernel == Subspace.full(2) and sp.x == vec([3, 4])

    def test_sigma_kills_image(self):
        n2 = Matrix.from_rows([[0, 1], [0, 0]])
        x = AlgebraElement(affine(2), n2, vec([1, 0]))  # v = e1 in Im omega
        assert all(c == 0 for c in project_to_sigma(x).x)

    def test_sigma_shift_example(self):
        n2 = Matrix.from_rows([[0, 1], [0, 0]])
        x = AlgebraElement(affine(2), n2, vec([0, 1]))
        sp = project_to_sigma(x)
        assert sp.kernel == Subspace.span(2, [vec([0, 1])])
        assert sp.x == vec([1])

    def test_pi_full_restriction_at_zero(self):
        xi = DualAlgebraElement(affine(2), Matrix.from_rows([[1, 2], [3, 4]]),
                                vec([0, 0]))
        pi = project_to_pi(xi)
        assert pi.little.dim == 4
        assert len(pi.l) == 4

    def test_pi_kills_annihilator(self):
        # L with trace pairing zero against every bottom-row-zero matrix
        xi = DualAlgebraElement(affine(2), Matrix.from_rows([[0, 0], [5, 7]]),
                                vec([0, 1]))
        assert all(c == 0 for c in project_to_pi(xi).l)


class TestVectorClasses:
    def test_timelike_basis_vector(self):
        vc = vector_orbit_class(vec([1, 0, 0, 0]), poincare(1, 3))
        assert vc.tag == "timelike" and vc.value == 1

    def test_zero(self):
        assert vector_orbit_class(vec([0, 0]), P11).tag == "zero"

    def test_null(self):
        assert vector_orbit_class(vec([1, 1]), P11).tag == "null-nonzero"

    def test_affine_tags(self):
        assert vector_orbit_class(vec([0, 0]), affine(2)).tag == "zero"
        assert vector_orbit_class(vec([1, 0]), affine(2)).tag == "nonzero"


class TestActionIdentities:
    @pytest.mark.parametrize("kind", [affine(2), affine(3), P11, poincare(1, 2)])
    def test_action_laws_and_pairing(self, kind):
        s = Sampler(421, kind)
        for _ in range(8):
            g, h = s.group_element(), s.group_element()
            x, xi = s.algebra_element(), s.dual_element()
            assert adjoint_act(g.compose(h), x) == adjoint_act(g, adjoint_act(h, x))
            assert coadjoint_act(g.compose(h), xi) == coadjoint_act(
                g, coadjoint_act(h, xi))
            assert full_pairing(coadjoint_act(g, xi), x) == full_pairing(
                xi, adjoint_act(g.inverse(), x))

    def test_inverse_composes_to_identity(self):
        s = Sampler(5, poincare(1, 2))
        g = s.group_element()
        assert g.compose(g.inverse()) == GroupElement.identity(g.kind)


def test_kind_json_round_trip():
    for kind in (affine(3), poincare(2, 1)):
        assert GroupKind.from_json(kind.to_json()) == kind
