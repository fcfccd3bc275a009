"""Centralizer flags, quotient forms, and the extension algorithms.

For an operator M the centralizer of M preserves the descending chain

    ker M  >  Im M / ker M intersection  >  Im M^2 /\\ ker M  >  ...

Strictifying that chain gives the flag used to classify centralizer orbits.
In the orthogonal case each strict quotient carries a canonical
non-degenerate form (symmetric or skew, alternating with the exponent), and
the centralizer acts on ker M by every flag-preserving map that also
preserves those forms.  The converse direction is constructive: a
flag-and-form preserving map of the kernel extends to a commuting (and, in
the orthogonal case, isometric) map of the whole space.  `extend_commuting`
and `extend_isometry` implement those extension algorithms.

Affine kinds run the machinery on ker(omega^T) in V*; orthogonal kinds on
ker(omega) in V, where omega is identified with -omega^T through the form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (DimensionMismatch, InvariantViolation, MembershipError,
                     VerificationFailure)
from .groups import GroupKind, is_skew_adjoint
from .linalg import (Matrix, Subspace, Vector, ZERO, annihilator,
                     completion_basis, dot, image, intersect, kernel,
                     quotient_coords, signature, solve, solve_matrix,
                     subspace_sum, restrict_operator, vec_add, vec_scale)


@dataclass(frozen=True)
class Flag:
    """Strictly descending chain E_0 > E_1 > ... > E_{k+1} = 0 inside ker M.

    powers[j] is the largest exponent m with E_j = Im M^m /\\ ker M; the
    quotient form on E_j/E_{j+1} is evaluated with that exponent.
    """

    ambient: Subspace
    steps: tuple[Subspace, ...]
    powers: tuple[int, ...]

    @property
    def k(self) -> int:
        """Index of the last nonzero step; strata are E_j \\ E_{j+1}, 0 <= j <= k."""
        return len(self.steps) - 2

    @property
    def length(self) -> int:
        """Least m with Im M^m /\\ ker M = 0."""
        return self.powers[-1] + 1 if self.k >= 0 else 0

    def step_dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.steps)

    def quotient_reps(self, j: int) -> list[Vector]:
        """Deterministic representatives of a basis of E_j / E_{j+1}."""
        return completion_basis(self.steps[j], self.steps[j + 1])

    def stratum_of(self, p: Vector) -> int:
        """The unique j with p in E_j \\ E_{j+1}; requires p in ker, p != 0."""
        if not self.ambient.contains(p):
            raise MembershipError("vector is outside the kernel")
        j = 0
        while j + 1 < len(self.steps) and self.steps[j + 1].contains(p):
            j += 1
        if j == len(self.steps) - 1:
            raise MembershipError("zero vector has no stratum")
        return j

    def to_json(self) -> dict:
        return {
            "ambient_dim": self.ambient.ambient_dim,
            "kernel_dim": self.ambient.dim,
            "step_dims": list(self.step_dims()),
            "powers": list(self.powers),
        }


@dataclass(frozen=True)
class QuotientForm:
    """Gram matrix of the induced form on E_j / E_{j+1}."""

    j: int
    power: int
    gram: Matrix
    symmetric: bool
    signature: tuple[int, int] | None

    def to_json(self) -> dict:
        return {
            "step": self.j,
            "power": self.power,
            "gram": self.gram.to_json(),
            "symmetric": self.symmetric,
            "signature": list(self.signature) if self.signature else None,
        }


def flag_of_operator(m: Matrix) -> Flag:
    """Flag of the chain Im M^j /\\ ker M, strictified with power bookkeeping."""
    if not m.is_square():
        raise DimensionMismatch("flag of a non-square operator")
    ker = kernel(m)
    steps: list[Subspace] = [ker]
    powers: list[int] = [0]
    current = Matrix.identity(m.rows)
    j = 0
    while steps[-1].dim > 0:
        j += 1
        current = current @ m
        nxt = intersect(image(current), ker)
        if nxt.dim == steps[-1].dim:
            powers[-1] = j
            continue
        steps.append(nxt)
        powers.append(j)
    return Flag(ker, tuple(steps), tuple(powers[:-1]) if len(steps) > 1 else ())


def compute_flag(omega: Matrix, kind: GroupKind) -> Flag:
    """Centralizer flag of omega for the given kind.

    Affine: on ker(omega^T) in V*.  Orthogonal: omega must be skew
    self-adjoint, and the flag is computed on ker(omega) in V.
    """
    q = kind.form()
    if q is None:
        return flag_of_operator(omega.transpose())
    if not is_skew_adjoint(omega, q):
        raise InvariantViolation("operator is not skew self-adjoint for the form")
    return flag_of_operator(omega)


def dual_flag(flag: Flag) -> tuple[Subspace, ...]:
    """Ascending annihilator chain 0 < E_k^0 < ... < E_0^0 = (ker M)*.

    Subspaces live in the dual of the kernel, in coordinates against the
    kernel's canonical basis; entry j is the annihilator of E_j, so the
    tuple is descending in j like `steps` but ascending as spaces.
    """
    amb = flag.ambient
    out = []
    for step in flag.steps:
        coords = [amb.coords(b) for b in step.basis_vectors()]
        out.append(annihilator(Subspace.span(amb.dim, coords)))
    return tuple(out)


def preimage_under_power(m: Matrix, power: int, target: Vector) -> Vector:
    sol = solve(m.power(power), target)
    if sol is None:
        raise MembershipError("vector is not in the image of the power")
    return sol


def quotient_form(omega: Matrix, flag: Flag, j: int, gram: Matrix) -> QuotientForm:
    """Induced form <[x], [y]> = Q(x, w) with M^m w = y on E_j / E_{j+1}.

    Symmetric for even m and skew for odd m; always non-degenerate. A
    degenerate Gram matrix here would contradict the structure theory, so it
    raises VerificationFailure rather than returning.
    """
    if j < 0 or j > flag.k:
        raise DimensionMismatch("quotient step out of range")
    mpow = flag.powers[j]
    reps = flag.quotient_reps(j)
    pre = [preimage_under_power(omega, mpow, r) for r in reps]
    entries = [[dot(a, gram.apply(w)) for w in pre] for a in reps]
    g = Matrix.from_rows(entries) if reps else Matrix.zeros(0, 0)
    sym = (g == g.transpose())
    skew = (g == -g.transpose())
    if not (sym or skew):
        raise VerificationFailure("quotient form is neither symmetric nor skew")
    if g.cols and g.det() == 0:
        raise VerificationFailure("quotient form is degenerate")
    expect_sym = (mpow % 2 == 0)
    if g.cols and sym != expect_sym and not g.is_zero():
        # 1x1 skew matrices are zero, so a genuine parity clash is impossible
        raise VerificationFailure("quotient form parity disagrees with the exponent")
    return QuotientForm(j, mpow, g, expect_sym,
                        signature(g) if expect_sym and g.cols else
                        ((0, 0) if expect_sym else None))


def all_quotient_forms(omega: Matrix, flag: Flag, gram: Matrix) -> list[QuotientForm]:
    return [quotient_form(omega, flag, j, gram) for j in range(flag.k + 1)]


# --- maps of the kernel in kernel coordinates --------------------------------

def kernel_map_images(flag: Flag, r_ker: Matrix) -> list[Vector]:
    """Ambient images of the kernel's canonical basis under r_ker."""
    amb = flag.ambient
    if r_ker.shape != (amb.dim, amb.dim):
        raise DimensionMismatch("kernel map has the wrong shape")
    return [amb.from_coords(r_ker.col(i)) for i in range(amb.dim)]


def apply_kernel_map(flag: Flag, r_ker: Matrix, v: Vector) -> Vector:
    return flag.ambient.from_coords(r_ker.apply(flag.ambient.coords(v)))


def preserves_flag(flag: Flag, r_ker: Matrix) -> bool:
    for step in flag.steps:
        imgs = [apply_kernel_map(flag, r_ker, b) for b in step.basis_vectors()]
        if Subspace.span(flag.ambient.ambient_dim, imgs) != step:
            return False
    return True


def induced_quotient_map(flag: Flag, r_ker: Matrix, j: int) -> Matrix:
    """Matrix of r_ker on E_j / E_{j+1} in the deterministic quotient basis."""
    reps = flag.quotient_reps(j)
    cols = []
    for rep in reps:
        img = apply_kernel_map(flag, r_ker, rep)
        cols.append(quotient_coords(flag.steps[j], flag.steps[j + 1], img))
    return Matrix.from_cols(cols, rows=len(reps))


def preserves_quotient_forms(omega: Matrix, flag: Flag, gram: Matrix,
                             r_ker: Matrix) -> bool:
    for j in range(flag.k + 1):
        qf = quotient_form(omega, flag, j, gram)
        rq = induced_quotient_map(flag, r_ker, j)
        if rq.transpose() @ qf.gram @ rq != qf.gram:
            return False
    return True


# --- extension algorithms -----------------------------------------------------

def _glue_on_sum(m: Matrix, im: Subspace, ker: Subspace, r_bar: Matrix,
                 r_ker: Matrix) -> tuple[list[Vector], list[Vector]]:
    """Basis of Im M + ker M with images under (r_bar on Im, r_ker on ker)."""
    s = subspace_sum(im, ker)
    dom, img = [], []
    for b in s.basis_vectors():
        # decompose b = im-part + ker-part; any split works, the two maps
        # agree on the overlap
        stacked = im.basis.hstack(ker.basis)
        coeffs = solve(stacked, b)
        if coeffs is None:
            raise VerificationFailure("sum decomposition failed")
        a = coeffs[: im.dim]
        c = coeffs[im.dim:]
        ia = im.basis.apply(r_bar.apply(a))
        kc = ker.basis.apply(r_ker.apply(c))
        dom.append(b)
        img.append(vec_add(ia, kc))
    return dom, img


def _complement_vectors(n: int, s: Subspace) -> list[Vector]:
    """Standard basis vectors completing s to Q^n, in index order."""
    out = []
    cur = s
    for i in range(n):
        e = tuple(Fraction(1) if j == i else ZERO for j in range(n))
        if not cur.contains(e):
            out.append(e)
            cur = Subspace.span(n, cur.basis_vectors() + [e])
    return out


def _assemble(n: int, dom: list[Vector], img: list[Vector]) -> Matrix:
    d = Matrix.from_cols(dom, rows=n)
    i = Matrix.from_cols(img, rows=n)
    return i @ d.inverse()


def extend_commuting(m: Matrix, r_ker: Matrix) -> Matrix:
    """Extend a flag-preserving isomorphism of ker M to R with RM = MR.

    r_ker is given in the canonical-basis coordinates of ker M. The output
    satisfies R|ker = r_ker exactly. Recursion: restrict to Im M, extend
    there, then solve M(R y) = R(M y) for a complement basis.
    """
    n = m.rows
    ker = kernel(m)
    flag = flag_of_operator(m)
    if r_ker.shape != (ker.dim, ker.dim):
        raise DimensionMismatch("kernel map has the wrong shape")
    if ker.dim and r_ker.det() == 0:
        raise InvariantViolation("kernel map must be invertible")
    if not preserves_flag(flag, r_ker):
        raise InvariantViolation("kernel map does not preserve the flag")
    r = _extend_commuting_core(m, r_ker)
    _check_commuting(m, ker, r_ker, r)
    return r


def _extend_commuting_core(m: Matrix, r_ker: Matrix) -> Matrix:
    n = m.rows
    ker = kernel(m)
    if ker.dim == 0:
        return Matrix.identity(n)
    im = image(m)
    ik = intersect(im, ker)
    if ik.dim == 0:
        # Im M and ker M are complementary; identity on the image part
        dom = im.basis_vectors() + ker.basis_vectors()
        img = im.basis_vectors() + kernel_map_images_from(ker, r_ker)
        return _assemble(n, dom, img)
    m_bar = restrict_operator(m, im)
    kbar = kernel(m_bar)
    r_bar_ker = _restrict_kernel_map(ker, r_ker, im, kbar)
    r_bar = _extend_commuting_core(m_bar, r_bar_ker)
    dom, img = _glue_on_sum(m, im, ker, r_bar, r_ker)
    s = subspace_sum(im, ker)
    for y in _complement_vectors(n, s):
        my = m.apply(y)
        rmy = im.basis.apply(r_bar.apply(im.coords(my)))
        ry = solve(m, rmy)
        if ry is None:
            raise VerificationFailure("commuting extension system was inconsistent")
        dom.append(y)
        img.append(ry)
    return _assemble(n, dom, img)


def kernel_map_images_from(ker: Subspace, r_ker: Matrix) -> list[Vector]:
    return [ker.from_coords(r_ker.col(i)) for i in range(ker.dim)]


def _restrict_kernel_map(ker: Subspace, r_ker: Matrix, im: Subspace,
                         kbar: Subspace) -> Matrix:
    """Express r_ker on ker(M|Im) = Im /\\ ker in kbar's canonical coordinates."""
    cols = []
    for i in range(kbar.dim):
        ambient = im.basis.apply(kbar.basis.col(i))
        img = ker.from_coords(r_ker.apply(ker.coords(ambient)))
        cols.append(kbar.coords(im.coords(img)))
    return Matrix.from_cols(cols, rows=kbar.dim)


def _check_commuting(m: Matrix, ker: Subspace, r_ker: Matrix, r: Matrix):
    if r.det() == 0:
        raise VerificationFailure("extension is singular")
    if r @ m != m @ r:
        raise VerificationFailure("extension does not commute")
    if r @ ker.basis != Matrix.from_cols(kernel_map_images_from(ker, r_ker),
                                         rows=m.rows):
        raise VerificationFailure("extension does not restrict to the kernel map")


def extend_isometry(m: Matrix, gram: Matrix, r_ker: Matrix) -> Matrix:
    """Extend a flag-and-form preserving map of ker M to an isometry.

    m must be skew self-adjoint for gram (symmetric top level). Output R
    satisfies R M = M R, R^T gram R = gram, and R|ker = r_ker, all exactly.
    """
    if gram != gram.transpose():
        raise InvariantViolation("top-level form must be symmetric")
    if not is_skew_adjoint(m, gram):
        raise InvariantViolation("operator is not skew self-adjoint for the form")
    ker = kernel(m)
    flag = flag_of_operator(m)
    if r_ker.shape != (ker.dim, ker.dim):
        raise DimensionMismatch("kernel map has the wrong shape")
    if ker.dim and r_ker.det() == 0:
        raise InvariantViolation("kernel map must be invertible")
    if not preserves_flag(flag, r_ker):
        raise InvariantViolation("kernel map does not preserve the flag")
    if not preserves_quotient_forms(m, flag, gram, r_ker):
        raise InvariantViolation("kernel map does not preserve the quotient forms")
    r = _extend_isometry_core(m, gram, r_ker)
    _check_commuting(m, ker, r_ker, r)
    if r.transpose() @ gram @ r != gram:
        raise VerificationFailure("extension does not preserve the form")
    return r


def _extend_isometry_core(m: Matrix, gram: Matrix, r_ker: Matrix) -> Matrix:
    n = m.rows
    ker = kernel(m)
    if ker.dim == 0:
        return Matrix.identity(n)
    im = image(m)
    ik = intersect(im, ker)
    if ik.dim == 0:
        dom = im.basis_vectors() + ker.basis_vectors()
        img = im.basis_vectors() + kernel_map_images_from(ker, r_ker)
        return _assemble(n, dom, img)

    # induced form on Im M: gram_bar(M x, M y) = gram(M x, y)
    imb = im.basis_vectors()
    pre = [solve(m, b) for b in imb]
    gram_bar = Matrix.from_rows([[dot(a, gram.apply(w)) for w in pre] for a in imb])

    m_bar = restrict_operator(m, im)
    kbar = kernel(m_bar)
    r_bar_ker = _restrict_kernel_map(ker, r_ker, im, kbar)
    r_bar = _extend_isometry_core(m_bar, gram_bar, r_bar_ker)

    dom, img = _glue_on_sum(m, im, ker, r_bar, r_ker)
    s = subspace_sum(im, ker)
    ys = _complement_vectors(n, s)
    if not ys:
        return _assemble(n, dom, img)

    # provisional images: M(R y) = R(M y)
    ry = []
    for y in ys:
        rmy = im.basis.apply(r_bar.apply(im.coords(m.apply(y))))
        sol = solve(m, rmy)
        if sol is None:
            raise VerificationFailure("isometric extension system was inconsistent")
        ry.append(sol)

    # kernel corrections: fix gram(R y_i, r x_j) for kernel-quotient reps x_j
    xs = completion_basis(ker, ik)
    rxs = [apply_kernel_map_sub(ker, r_ker, x) for x in xs]
    if xs:
        rows = [[dot(kb, gram.apply(rx)) for kb in ker.basis_vectors()]
                for rx in rxs]
        sysmat = Matrix.from_rows(rows)
        for i, y in enumerate(ys):
            rhs = tuple(dot(y, gram.apply(x)) - dot(ry[i], gram.apply(rx))
                        for x, rx in zip(xs, rxs))
            coef = solve(sysmat, rhs)
            if coef is None:
                raise VerificationFailure("kernel correction system was inconsistent")
            ry[i] = vec_add(ry[i], ker.basis.apply(coef))

    # image-kernel corrections: fix gram(R y_i, R y_j), sequentially in i.
    # ry[j] for j < i already carries its correction, so the residual target
    # is gram(y_i, y_j) - gram(ry_i, ry_j) with the current values; the
    # correction u_i lives in Im /\ ker and pairs with earlier columns
    # through the induced form on the image.
    sym = (gram == gram.transpose())
    ik_cols = ik.basis_vectors()
    for i in range(len(ys)):
        eqs = []
        rhs = []
        for j in range(i):
            eqs.append([dot(c, gram.apply(ry[j])) for c in ik_cols])
            rhs.append(dot(ys[i], gram.apply(ys[j])) - dot(ry[i], gram.apply(ry[j])))
        if sym:
            eqs.append([2 * dot(c, gram.apply(ry[i])) for c in ik_cols])
            rhs.append(dot(ys[i], gram.apply(ys[i])) - dot(ry[i], gram.apply(ry[i])))
        if eqs:
            coef = solve(Matrix.from_rows(eqs), tuple(rhs))
            if coef is None:
                raise VerificationFailure("form correction system was inconsistent")
            ry[i] = vec_add(ry[i], ik.basis.apply(coef))

    dom.extend(ys)
    img.extend(ry)
    return _assemble(n, dom, img)


def apply_kernel_map_sub(ker: Subspace, r_ker: Matrix, v: Vector) -> Vector:
    return ker.from_coords(r_ker.apply(ker.coords(v)))
