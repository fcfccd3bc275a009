"""Flags, quotient forms, and the extension algorithms."""

import pytest

from orbitforge.errors import InvariantViolation, VerificationFailure
from orbitforge.flags import (compute_flag, dual_flag, extend_commuting,
                              extend_isometry, flag_of_operator,
                              induced_quotient_map, preserves_flag,
                              quotient_form)
from orbitforge.groups import affine, poincare
from orbitforge.linalg import (Matrix, Subspace, dot, image, kernel,
                               restrict_operator, signature, vec)
from orbitforge.verify import Sampler


N2_PLUS_0 = Matrix.from_rows([[0, 1, 0], [0, 0, 0], [0, 0, 0]])

# isotropic-direction rotation in the 2+1 orthogonal algebra:
# omega x = n Q(a, x) - a Q(n, x) with n = (1,0,1), a = e2, Q = diag(1,1,-1)
P21 = poincare(2, 1)
NULLROT = Matrix.from_rows([[0, 1, 0], [-1, 0, 1], [0, 1, 0]])
NVEC = vec([1, 0, 1])


class TestComputeFlag:
    def test_zero_operator(self):
        flag = compute_flag(Matrix.zeros(3, 3), affine(3))
        assert flag.step_dims() == (3, 0)
        assert flag.powers == (0,)
        assert flag.length == 1

    def test_invertible_operator(self):
        flag = compute_flag(Matrix.diagonal([1, 2]), affine(2))
        assert flag.ambient.dim == 0
        assert flag.length == 0

    def test_shift_plus_zero(self):
        # kernel of the transpose is {x = 0}; the chain drops by one twice
        flag = compute_flag(N2_PLUS_0, affine(3))
        assert flag.ambient == Subspace.span(3, [vec([0, 1, 0]), vec([0, 0, 1])])
        assert flag.steps[1] == Subspace.span(3, [vec([0, 1, 0])])
        assert flag.step_dims() == (2, 1, 0)
        assert flag.powers == (0, 1)

    def test_null_rotation_flag(self):
        flag = compute_flag(NULLROT, P21)
        assert flag.step_dims() == (1, 0)
        assert flag.powers == (2,)
        assert flag.ambient == Subspace.span(3, [NVEC])

    def test_repeated_then_dropping_chain(self):
        # one size-3 nilpotent block and one 1-dim kernel line: the chain
        # Im^m /\ ker repeats before dropping
        m = Matrix.from_rows([
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 0],
            [0, 0, 0, 0]])
        flag = flag_of_operator(m)
        assert flag.step_dims() == (2, 1, 0)
        assert flag.powers == (0, 2)

    def test_poincare_requires_skew_adjoint(self):
        with pytest.raises(InvariantViolation):
            compute_flag(Matrix.identity(3), P21)


class TestDualFlag:
    def test_zero_operator(self):
        flag = compute_flag(Matrix.zeros(2, 2), affine(2))
        anns = dual_flag(flag)
        assert anns[0].dim == 0
        assert anns[-1].dim == 2

    def test_shift_plus_zero(self):
        flag = compute_flag(N2_PLUS_0, affine(3))
        anns = dual_flag(flag)
        # annihilator of span{e2} inside the kernel's dual is the e3-slot
        assert anns[1] == Subspace.span(2, [vec([0, 1])])
        assert [a.dim for a in anns] == [0, 1, 2]

    def test_double_dual_is_identity(self):
        flag = compute_flag(N2_PLUS_0, affine(3))
        for step in flag.steps:
            coords = Subspace.span(flag.ambient.dim,
                                   [flag.ambient.coords(b)
                                    for b in step.basis_vectors()])
            from orbitforge.linalg import annihilator
            assert annihilator(annihilator(coords)) == coords


class TestQuotientForms:
    def test_zero_omega_full_form(self):
        kind = poincare(1, 2)
        flag = compute_flag(Matrix.zeros(3, 3), kind)
        qf = quotient_form(Matrix.zeros(3, 3), flag, 0, kind.form())
        assert qf.gram == kind.form()
        assert qf.signature == (1, 2)
        assert qf.power == 0

    def test_null_rotation_form(self):
        flag = compute_flag(NULLROT, P21)
        qf = quotient_form(NULLROT, flag, 0, P21.form())
        assert qf.power == 2
        assert qf.gram == Matrix.from_rows([[-1]])
        assert qf.signature == (0, 1)

    def test_forms_nondegenerate_random(self):
        for kind in (poincare(1, 2), poincare(1, 3), poincare(2, 2)):
            s = Sampler(99, kind)
            for _ in range(10):
                w = s.algebra_matrix()
                flag = flag_of_operator(w)
                for j in range(flag.k + 1):
                    qf = quotient_form(w, flag, j, kind.form())
                    if qf.gram.cols:
                        assert qf.gram.det() != 0
                    assert qf.symmetric == (qf.power % 2 == 0)

    def test_signature_totals_for_nilpotent(self):
        # hyperbolic pairs per block plus the symmetric-step signatures
        # reassemble the ambient signature
        for kind in (poincare(1, 1), poincare(1, 2), poincare(2, 2)):
            s = Sampler(7, kind)
            n = kind.dim
            checked = 0
            for _ in range(40):
                w = s.algebra_matrix()
                if not w.power(n).is_zero():
                    continue
                flag = flag_of_operator(w)
                plus = minus = 0
                for j in range(flag.k + 1):
                    qf = quotient_form(w, flag, j, kind.form())
                    mult = qf.gram.rows
                    if qf.symmetric:
                        half = qf.power // 2
                        sp, sm = qf.signature
                        if half % 2 == 1:
                            sp, sm = sm, sp
                        plus += half * mult + sp
                        minus += half * mult + sm
                    else:
                        half = (qf.power + 1) // 2
                        plus += half * mult
                        minus += half * mult
                assert (plus, minus) == signature(kind.form())
                checked += 1
            assert checked >= 5


class TestExtendCommuting:
    def test_identity_kernel_map(self):
        m = N2_PLUS_0.transpose()
        d = kernel(m).dim
        r = extend_commuting(m, Matrix.identity(d))
        assert r @ m == m @ r
        assert r.det() != 0

    def test_worked_example(self):
        # kernel basis (e2, e3); map e2 -> 2 e2, e3 -> e2 + e3
        m = N2_PLUS_0.transpose()
        rk = Matrix.from_rows([[2, 1], [0, 1]])
        r = extend_commuting(m, rk)
        assert r @ m == m @ r
        assert r.apply(vec([0, 1, 0])) == vec([0, 2, 0])
        assert r.apply(vec([0, 0, 1])) == vec([0, 1, 1])

    def test_invertible_operator_gives_identity(self):
        m = Matrix.diagonal([1, 2])
        assert extend_commuting(m, Matrix.zeros(0, 0)) == Matrix.identity(2)

    def test_non_flag_preserving_rejected(self):
        m = N2_PLUS_0.transpose()
        # swapping e2 (deep stratum) with e3 breaks the chain
        with pytest.raises(InvariantViolation):
            extend_commuting(m, Matrix.from_rows([[0, 1], [1, 0]]))

    def test_randomized(self):
        for kind in (affine(3), affine(4), affine(5), affine(6)):
            s = Sampler(50 + kind.n, kind)
            for _ in range(8):
                w = s.algebra_matrix()
                m = w.transpose()
                if kernel(m).dim == 0:
                    continue
                rk = s.kernel_map(m, None)
                r = extend_commuting(m, rk)
                assert r @ m == m @ r and r.det() != 0


class TestExtendIsometry:
    def test_identity_kernel_map(self):
        q = P21.form()
        r = extend_isometry(NULLROT, q, Matrix.identity(1))
        assert r @ NULLROT == NULLROT @ r
        assert r.transpose() @ q @ r == q

    def test_reflection_of_isotropic_line(self):
        # n -> -n preserves the quotient form ((-1)^2 (-1) = -1)
        q = P21.form()
        r = extend_isometry(NULLROT, q, Matrix.from_rows([[-1]]))
        assert r.apply(NVEC) == vec([-1, 0, -1])
        assert r @ NULLROT == NULLROT @ r
        assert r.transpose() @ q @ r == q

    def test_scaling_rejected(self):
        # n -> 2n scales the quotient form value (4 (-1) != -1)
        with pytest.raises(InvariantViolation):
            extend_isometry(NULLROT, P21.form(), Matrix.from_rows([[2]]))

    def test_top_level_skew_rejected(self):
        skew = Matrix.from_rows([[0, 1], [-1, 0]])
        with pytest.raises(InvariantViolation):
            extend_isometry(Matrix.zeros(2, 2), skew, Matrix.identity(2))

    def test_randomized(self):
        for kind in (poincare(1, 1), poincare(1, 2), poincare(2, 2),
                     poincare(1, 3), poincare(2, 3)):
            s = Sampler(kind.m * 10 + kind.n, kind)
            q = kind.form()
            for _ in range(8):
                w = s.algebra_matrix()
                if kernel(w).dim == 0:
                    continue
                rk = s.kernel_map(w, q)
                r = extend_isometry(w, q, rk)
                assert r @ w == w @ r
                assert r.transpose() @ q @ r == q


class TestSubflag:
    def test_restriction_flag_is_tail(self):
        for kind, seed in ((affine(4), 3), (poincare(2, 2), 4)):
            s = Sampler(seed, kind)
            for _ in range(12):
                w = s.algebra_matrix()
                m = w if kind.family == "poincare" else w.transpose()
                flag = flag_of_operator(m)
                if flag.k < 1:
                    continue
                im = image(m)
                tail = flag_of_operator(restrict_operator(m, im))
                expect = [Subspace.span(im.dim,
                                        [im.coords(b) for b in st.basis_vectors()])
                          for st in flag.steps[1:]]
                assert list(tail.steps) == expect
