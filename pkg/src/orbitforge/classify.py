"""Canonical orbit labels and the adjoint/coadjoint orbit correspondence.

Orbits of the semidirect product are named through the intermediate space
of pairs (omega, p) with omega^T p = 0.  Every classifier funnels into
`classify_delta`:

* adjoint elements are pushed along the kernel-functional bundle and the
  flag-stratum correspondence into a representative pair;
* coadjoint elements are reduced to a little-algebra functional, converted
  to an adjoint representative of the little group (recursively, or through
  the invariant trace form at the reductive base cases), and paired with p.

A label is a nested structure: the orbit class of the vector part together
with a label for the fibre, which is a similarity class of gl(k), a small
orthogonal-algebra class, or recursively another pair label.  Equality of
labels is exact equality of rational data.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (DimensionMismatch, InvariantViolation, MembershipError,
                     UnsupportedLeaf, VerificationFailure)
from .flags import (Flag, compute_flag, dual_flag, flag_of_operator,
                    quotient_form)
from .groups import (AlgebraElement, DualAlgebraElement, GroupKind,
                     VectorClass, affine, algebra_basis, is_skew_adjoint,
                     little_algebra_basis, poincare, so_basis, so_subspace,
                     _frac_json)
from .linalg import (Matrix, Subspace, Vector, ZERO, basis_vec, dot,
                     is_zero_vec, kernel, quotient_coords, restrict_operator,
                     signature, solve, vec_add, vec_scale, zero_vec)
from .qpoly import QPoly, invariant_factors


# --- label types -------------------------------------------------------------

@dataclass(frozen=True)
class GLClass:
    """Invariant factors of xI - omega: a complete similarity invariant.

    Stored as monic coefficient tuples (low degree first), d_1 | d_2 | ...,
    including the trivial factors, so a k x k matrix always has k entries.
    """

    factors: tuple[tuple[Fraction, ...], ...]

    def to_json(self) -> dict:
        return {"type": "gl",
                "invariant_factors": [[_frac_json(c) for c in f] for f in self.factors]}


@dataclass(frozen=True)
class SOClass:
    """Adjoint class in one of the small orthogonal algebras.

    leaf names the signature case; data holds exact rational invariants
    (trace-form values, squared radii, or the real part and squared
    imaginary part of the quadratic invariant in the 4-dimensional case).
    """

    leaf: str
    data: tuple

    def to_json(self) -> dict:
        return {"type": "so", "leaf": self.leaf,
                "data": [x if isinstance(x, str) else _frac_json(x) for x in self.data]}


@dataclass(frozen=True)
class OrbitLabel:
    vector: VectorClass
    fiber: "GLClass | SOClass | OrbitLabel"

    def to_json(self) -> dict:
        return {"type": "orbit", "vector": self.vector.to_json(),
                "fiber": self.fiber.to_json()}


@dataclass(frozen=True)
class CentralizerLabel:
    """Orbit of the centralizer group on the kernel or its dual."""

    side: str      # "primal" | "dual"
    variant: str   # "zero" | "affine-step" | "ortho-step"
    step: int | None = None
    value: Fraction | None = None

    def to_json(self) -> dict:
        out = {"side": self.side, "variant": self.variant}
        if self.step is not None:
            out["step"] = self.step
        if self.value is not None:
            out["value"] = _frac_json(self.value)
        return out


@dataclass(frozen=True)
class HierarchyNode:
    name: str
    children: tuple["HierarchyNode", ...] = ()

    def leaves(self) -> list[str]:
        if not self.children:
            return [self.name]
        out = []
        for c in self.children:
            out.extend(c.leaves())
        return out

    def to_json(self) -> dict:
        return {"name": self.name, "children": [c.to_json() for c in self.children]}


# --- gl similarity classes ----------------------------------------------------

def gl_class(omega: Matrix) -> GLClass:
    """Complete GL-conjugation invariant of a rational square matrix."""
    return GLClass(tuple(f.coeffs for f in invariant_factors(omega)))


# --- small orthogonal classes ---------------------------------------------------

def _pfaffian4(a: Matrix) -> Fraction:
    return (a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2])


@functools.lru_cache(maxsize=None)
def _sig(gram: Matrix) -> tuple[int, int]:
    return signature(gram)


def so_adjoint_class(gram: Matrix, w: Matrix) -> SOClass:
    """Adjoint orbit label of a skew self-adjoint w for the given form.

    The invariants are conjugation-invariant, so any rational Gram matrix of
    the right signature works, not only the diagonal one.
    """
    if not is_skew_adjoint(w, gram):
        raise InvariantViolation("matrix is not skew self-adjoint for the form")
    d = gram.rows
    if d == 0:
        return SOClass("so0", ())
    sig = _sig(gram)
    tr2 = (w @ w).trace()
    if d == 1:
        return SOClass("so1", ())
    if sig in ((2, 0), (0, 2)):
        return SOClass("so2", (-tr2 / 2,))
    if sig == (1, 1):
        return SOClass("so11", (tr2 / 2,))
    if sig in ((3, 0), (0, 3)):
        return SOClass("so3", (-tr2 / 2,))
    if sig in ((1, 2), (2, 1)):
        val = -tr2 / 2
        if w.is_zero():
            return SOClass("so12", ("zero",))
        if val == 0:
            return SOClass("so12", ("nilpotent",))
        return SOClass("so12", ("value", val))
    if sig in ((1, 3), (3, 1)):
        re = -tr2 / 8
        pf = _pfaffian4(gram @ w)
        im2 = pf * pf / (4 * abs(gram.det()))
        if w.is_zero():
            return SOClass("so13", ("zero",))
        if re == 0 and im2 == 0:
            return SOClass("so13", ("nilpotent",))
        return SOClass("so13", ("zeta", re, im2))
    raise UnsupportedLeaf(f"no adjoint classification for signature {sig}")


def small_so_class(w: Matrix, m: int, n: int) -> SOClass:
    """Adjoint class of w in so(m, n) with the standard diagonal form."""
    gram = Matrix.diagonal([1] * m + [-1] * n)
    if w.shape != (m + n, m + n):
        raise DimensionMismatch("matrix size does not match the signature")
    return so_adjoint_class(gram, w)


# --- flag strata and the fibre correspondence ----------------------------------

def _functional_kills(flag: Flag, x: Vector, step: Subspace) -> bool:
    amb = flag.ambient
    return all(dot(x, amb.coords(b)) == 0 for b in step.basis_vectors())


def _dual_stratum(flag: Flag, x: Vector) -> int:
    """The j with x in E_{j+1}^0 \\ E_j^0, for a nonzero functional x."""
    for j in range(len(flag.steps)):
        if _functional_kills(flag, x, flag.steps[j]):
            if j == 0:
                raise MembershipError("nonzero functional annihilates the kernel")
            return j - 1
    raise VerificationFailure("functional does not annihilate the zero space")


def _class_coords(flag: Flag, j: int, x: Vector) -> Vector:
    """Values of the functional x on the quotient basis of E_j/E_{j+1}."""
    amb = flag.ambient
    return tuple(dot(x, amb.coords(rep)) for rep in flag.quotient_reps(j))


def _phi_functional(flag: Flag, j: int, class_coords: Vector,
                    gram_j: Matrix | None) -> Vector:
    """Functional on the kernel pairing classes through the quotient form.

    With gram_j = None the identity pairing is used (the affine analogue).
    The functional is Q_j([p], [.]) on E_j and zero on the deterministic
    completion of E_j inside the kernel; it is canonical modulo
    annihilators of E_j.
    """
    amb = flag.ambient
    reps = flag.quotient_reps(j)
    # values on the quotient basis: z^T G e_b, i.e. G^T applied to the class
    vals = (list(class_coords) if gram_j is None
            else list(gram_j.transpose().apply(class_coords)))
    dom = [amb.coords(r) for r in reps]
    for b in flag.steps[j + 1].basis_vectors():
        dom.append(amb.coords(b))
        vals.append(ZERO)
    from .linalg import completion_basis
    for b in completion_basis(amb, flag.steps[j]):
        dom.append(amb.coords(b))
        vals.append(ZERO)
    dmat = Matrix.from_cols(dom, rows=amb.dim)
    sol = solve(dmat.transpose(), tuple(vals))
    if sol is None:
        raise VerificationFailure("functional interpolation failed")
    return sol


def classify_centralizer(omega: Matrix, p: Vector, kind: GroupKind) -> CentralizerLabel:
    """Orbit of p under the centralizer of omega acting on the kernel.

    Affine: p in ker(omega^T), orbit named by the flag stratum. Orthogonal:
    p in ker(omega), with the exact quotient-form value attached (zero value
    stands for the isotropic nonzero class, which is a single orbit).
    """
    flag = compute_flag(omega, kind)
    if not flag.ambient.contains(p):
        raise MembershipError("vector is outside the kernel")
    if is_zero_vec(p):
        return CentralizerLabel("primal", "zero")
    j = flag.stratum_of(p)
    if kind.family == "affine":
        return CentralizerLabel("primal", "affine-step", j)
    qf = quotient_form(omega, flag, j, kind.form())
    z = quotient_coords(flag.steps[j], flag.steps[j + 1], p)
    c = dot(z, qf.gram.apply(z))
    return CentralizerLabel("primal", "ortho-step", j, c)


def bijection_affine(label: CentralizerLabel) -> CentralizerLabel:
    """Stratum correspondence between the kernel and its dual (affine case)."""
    if label.variant == "ortho-step":
        raise InvariantViolation("orthogonal label passed to the affine bijection")
    if label.side != "primal":
        raise InvariantViolation("expected a primal-side label")
    if label.variant == "zero":
        return CentralizerLabel("dual", "zero")
    return CentralizerLabel("dual", "affine-step", label.step)


def phi_map(omega: Matrix, p: Vector, kind: GroupKind) -> Vector:
    """Form-induced functional on ker(omega), in kernel-basis coordinates.

    <phi(p), q> = Q_j([p], [q]) on the stratum's quotient, extended by zero
    on the deterministic complement. Scaling is linear and phi(p)(p)
    recovers the centralizer class value.
    """
    if kind.family != "poincare":
        raise InvariantViolation("phi_map needs an orthogonal kind")
    if is_zero_vec(p):
        raise MembershipError("phi_map requires a nonzero vector")
    flag = compute_flag(omega, kind)
    j = flag.stratum_of(p)
    qf = quotient_form(omega, flag, j, kind.form())
    z = quotient_coords(flag.steps[j], flag.steps[j + 1], p)
    return _phi_functional(flag, j, z, qf.gram)


# --- delta representatives ------------------------------------------------------

def _check_delta(omega: Matrix, p: Vector):
    if not is_zero_vec(omega.transpose().apply(p)):
        raise MembershipError("pair is not incident: omega^T p != 0")


def _aff_transport(p: Vector) -> Matrix:
    """Invertible r with last row p, so that the dual action sends p to e_n."""
    n = len(p)
    j0 = next(i for i, x in enumerate(p) if x != 0)
    rows = [basis_vec(n, i) for i in range(n) if i != j0]
    rows.append(p)
    return Matrix.from_rows(rows)


def adjoint_to_delta_aff(n: int, omega: Matrix, v: Vector) -> tuple[Matrix, Vector]:
    """Representative incident pair for the adjoint orbit of (omega, v)."""
    if n == 0:
        return omega, ()
    flag = flag_of_operator(omega.transpose())
    k = flag.ambient
    x = tuple(dot(q, v) for q in k.basis_vectors())
    if k.dim == 0 or all(c == 0 for c in x):
        return omega, zero_vec(n)
    j = _dual_stratum(flag, x)
    y = _class_coords(flag, j, x)
    reps = flag.quotient_reps(j)
    p = zero_vec(n)
    for c, rep in zip(y, reps):
        p = vec_add(p, vec_scale(c, rep))
    return omega, p


def delta_to_adjoint_aff(n: int, omega: Matrix, p: Vector) -> tuple[Matrix, Vector]:
    """Adjoint representative whose kernel functional matches the pair's stratum."""
    if n == 0 or is_zero_vec(p):
        return omega, zero_vec(n)
    flag = flag_of_operator(omega.transpose())
    j = flag.stratum_of(p)
    z = quotient_coords(flag.steps[j], flag.steps[j + 1], p)
    f = _phi_functional(flag, j, z, None)
    k = flag.ambient
    sol = solve(k.basis.transpose(), f)
    if sol is None:
        raise VerificationFailure("kernel functional has no vector representative")
    return omega, sol


def adjoint_to_delta_orth(gram: Matrix, omega: Matrix, v: Vector) -> tuple[Matrix, Vector]:
    n = gram.rows
    k = kernel(omega)
    x = tuple(dot(b, gram.apply(v)) for b in k.basis_vectors())
    if k.dim == 0 or all(c == 0 for c in x):
        return omega, zero_vec(n)
    flag = flag_of_operator(omega)
    j = _dual_stratum(flag, x)
    y = _class_coords(flag, j, x)
    qf = quotient_form(omega, flag, j, gram)
    z = qf.gram.transpose().inverse().apply(y)
    u = zero_vec(n)
    for c, rep in zip(z, flag.quotient_reps(j)):
        u = vec_add(u, vec_scale(c, rep))
    return omega, gram.apply(u)


def delta_to_adjoint_orth(gram: Matrix, omega: Matrix, p: Vector) -> tuple[Matrix, Vector]:
    n = gram.rows
    if is_zero_vec(p):
        return omega, zero_vec(n)
    u = gram.inverse().apply(p)
    flag = flag_of_operator(omega)
    j = flag.stratum_of(u)
    qf = quotient_form(omega, flag, j, gram)
    z = quotient_coords(flag.steps[j], flag.steps[j + 1], u)
    f = _phi_functional(flag, j, z, qf.gram)
    k = flag.ambient
    sol = solve(k.basis.transpose() @ gram, f)
    if sol is None:
        raise VerificationFailure("kernel functional has no vector representative")
    return omega, sol


# --- orthogonal little-algebra scaffolding --------------------------------------

def _perp_subspace(gram: Matrix, vectors: list[Vector]) -> Subspace:
    rows = [gram.apply(v) for v in vectors]
    return kernel(Matrix.from_rows(rows))


def _null_partner(gram: Matrix, nu: Vector) -> Vector:
    """Rational null nu' with G(nu, nu') = 1, chosen deterministically."""
    gnu = gram.apply(nu)
    idx = next((i for i, c in enumerate(gnu) if c != 0), None)
    if idx is None:
        raise VerificationFailure("form is degenerate on the ambient space")
    x = basis_vec(len(nu), idx)
    x = vec_scale(1 / gnu[idx], x)
    gxx = dot(x, gram.apply(x))
    return vec_sub_scaled(x, gxx / 2, nu)


def vec_sub_scaled(x: Vector, c: Fraction, y: Vector) -> Vector:
    return tuple(a - c * b for a, b in zip(x, y))


@dataclass(frozen=True)
class _NullFrame:
    """Hyperbolic pair (nu, nu') and the orthogonal complement W."""

    nu: Vector
    nu2: Vector
    w: Subspace
    gram_w: Matrix
    frame: Matrix       # columns nu, nu', basis of W
    frame_inv: Matrix


def _null_frame(gram: Matrix, nu: Vector) -> _NullFrame:
    nu2 = _null_partner(gram, nu)
    w = _perp_subspace(gram, [nu, nu2])
    bw = w.basis
    gram_w = bw.transpose() @ gram @ bw
    frame = Matrix.from_cols([nu, nu2] + w.basis_vectors(), rows=len(nu))
    return _NullFrame(nu, nu2, w, gram_w, frame, frame.inverse())


def _null_decompose(fr: _NullFrame, omega: Matrix) -> tuple[Matrix, Vector]:
    """Split omega in the stabilizer of nu into its (rotation, translation) part."""
    d = fr.w.dim
    if not is_zero_vec(omega.apply(fr.nu)):
        raise MembershipError("operator does not annihilate the null vector")
    c_amb = omega.apply(fr.nu2)
    c_coords = fr.frame_inv.apply(c_amb)
    if c_coords[0] != 0 or c_coords[1] != 0:
        raise VerificationFailure("stabilizer decomposition has stray components")
    c_w = c_coords[2:]
    cols = []
    for i in range(d):
        img = fr.frame_inv.apply(omega.apply(fr.w.basis.col(i)))
        if img[1] != 0:
            raise VerificationFailure("stabilizer image leaves the null flag")
        cols.append(img[2:])
    a = Matrix.from_cols(cols, rows=d)
    return a, c_w


def _null_compose(fr: _NullFrame, a: Matrix, c_w: Vector, gram: Matrix) -> Matrix:
    """Inverse of `_null_decompose`: build the stabilizer-algebra matrix.

    The result kills nu, sends nu' to the translation part, and acts on W by
    the rotation part with the shear term forced by skew self-adjointness.
    """
    n = len(fr.nu)
    c_amb = fr.w.basis.apply(c_w)
    cols = [zero_vec(n), c_amb]
    for i in range(fr.w.dim):
        wvec = fr.w.basis.col(i)
        img = fr.w.basis.apply(a.col(i))
        shear = -dot(wvec, gram.apply(c_amb))
        cols.append(vec_add(img, vec_scale(shear, fr.nu)))
    return Matrix.from_cols(cols, rows=n) @ fr.frame_inv


# --- delta classification --------------------------------------------------------

def classify_delta_aff(n: int, omega: Matrix, p: Vector) -> OrbitLabel:
    if n == 0:
        return OrbitLabel(VectorClass("zero"), GLClass(()))
    _check_delta(omega, p)
    if is_zero_vec(p):
        return OrbitLabel(VectorClass("zero"), gl_class(omega))
    r = _aff_transport(p)
    w2 = r @ omega @ r.inverse()
    if any(w2[n - 1, j] != 0 for j in range(n)):
        raise VerificationFailure("transported operator left the little algebra")
    a = w2.submatrix(0, n - 1, 0, n - 1)
    b = tuple(w2[i, n - 1] for i in range(n - 1))
    return OrbitLabel(VectorClass("nonzero"), classify_adjoint_aff(n - 1, a, b))


def classify_adjoint_aff(n: int, omega: Matrix, v: Vector) -> OrbitLabel:
    return classify_delta_aff(n, *adjoint_to_delta_aff(n, omega, v))


def classify_delta_orth(gram: Matrix, omega: Matrix, p: Vector) -> OrbitLabel:
    n = gram.rows
    if n == 0:
        return OrbitLabel(VectorClass("zero"), SOClass("so0", ()))
    _check_delta(omega, p)
    if is_zero_vec(p):
        return OrbitLabel(VectorClass("zero"), so_adjoint_class(gram, omega))
    ginv = gram.inverse()
    u = ginv.apply(p)
    c = dot(p, ginv.apply(p))
    if c != 0:
        w = _perp_subspace(gram, [u])
        bw = w.basis
        gram_w = bw.transpose() @ gram @ bw
        what = restrict_operator(omega, w)
        tag = "timelike" if c > 0 else "spacelike"
        return OrbitLabel(VectorClass(tag, c), so_adjoint_class(gram_w, what))
    fr = _null_frame(gram, u)
    a, c_w = _null_decompose(fr, omega)
    inner = classify_adjoint_orth(fr.gram_w, a, c_w)
    return OrbitLabel(VectorClass("null-nonzero"), inner)


def classify_adjoint_orth(gram: Matrix, omega: Matrix, v: Vector) -> OrbitLabel:
    return classify_delta_orth(gram, *adjoint_to_delta_orth(gram, omega, v))


# --- functionals on the orthogonal algebras --------------------------------------

@functools.lru_cache(maxsize=None)
def _kappa_gram_inv(gram: Matrix) -> Matrix:
    """Inverse Gram matrix of the invariant pairing Tr(AB) on the algebra."""
    basis = so_basis(gram)
    k = Matrix.from_rows([[(a @ b).trace() for b in basis] for a in basis])
    return k.inverse()


@functools.lru_cache(maxsize=None)
def _frobenius_gram_inv(gram: Matrix) -> Matrix:
    basis = so_basis(gram)
    k = Matrix.from_rows([[dot(a.flatten(), b.flatten()) for b in basis]
                          for a in basis])
    return k.inverse()


def _so_coords(gram: Matrix, x: Matrix) -> Vector:
    return so_subspace(gram).coords(x.flatten())


def _combine(basis: list[Matrix], coeffs: Vector, n: int) -> Matrix:
    out = Matrix.zeros(n, n)
    for c, b in zip(coeffs, basis):
        if c != 0:
            out = out + b.scale(c)
    return out


def _kappa_solve(gram: Matrix, tau: Vector) -> Matrix:
    """The algebra element w with Tr(w B_k) = tau_k for the canonical basis.

    The invariant pairing makes w |-> Tr(w, .) an equivariant isomorphism
    between adjoint and coadjoint orbits at the reductive base cases.
    """
    basis = so_basis(gram)
    coeffs = _kappa_gram_inv(gram).apply(tau)
    return _combine(basis, coeffs, gram.rows)


def _so_matrix_from_values(gram: Matrix, tau: Vector) -> Matrix:
    """The matrix L in the algebra with Tr(L^T B_k) = tau_k."""
    basis = so_basis(gram)
    coeffs = _frobenius_gram_inv(gram).apply(tau)
    return _combine(basis, coeffs, gram.rows)


def _so_values_of_matrix(gram: Matrix, l_mat: Matrix) -> Vector:
    lf = l_mat.flatten()
    return tuple(dot(lf, b.flatten()) for b in so_basis(gram))


def _stab_algebra_basis(gram: Matrix, p: Vector) -> list[Matrix]:
    """Basis of {X in so(gram) : X^T p = 0}, echelon-canonical."""
    d = gram.rows
    cols = []
    for u in range(d):
        for v in range(d):
            e = Matrix(d, d, tuple(
                tuple(Fraction(1) if (i, j) == (u, v) else ZERO for j in range(d))
                for i in range(d)))
            skew = (e.transpose() @ gram + gram @ e).flatten()
            cols.append(tuple(e.transpose().apply(p)) + skew)
    constraint = Matrix.from_cols(cols, rows=d + d * d)
    return [Matrix.unflatten(b, d, d) for b in kernel(constraint).basis_vectors()]


def _extend_functional(gram: Matrix, sub_basis: list[Matrix],
                       values: Vector) -> Vector:
    """Values on the full algebra basis of some functional extending `values`.

    The extension is the minimal-support solution of the interpolation
    system; any extension represents the same little-algebra functional.
    """
    rows = [_so_coords(gram, c) for c in sub_basis]
    if not rows:
        return tuple(ZERO for _ in so_basis(gram))
    sol = solve(Matrix.from_rows(rows), values)
    if sol is None:
        raise VerificationFailure("functional extension system was inconsistent")
    return sol


def _eval_so_functional(gram: Matrix, tau: Vector, x: Matrix) -> Fraction:
    return dot(tau, _so_coords(gram, x))


# --- coadjoint representatives ----------------------------------------------------

def coadjoint_to_delta_aff(n: int, l_mat: Matrix, p: Vector) -> tuple[Matrix, Vector]:
    """Incident-pair representative of the coadjoint orbit of (L, p)."""
    if n == 0:
        return Matrix.zeros(0, 0), ()
    if is_zero_vec(p):
        return l_mat.transpose(), p
    r = _aff_transport(p)
    lt = r.inverse().transpose() @ l_mat @ r.transpose()
    lm = lt.submatrix(0, n - 1, 0, n - 1)
    pm = tuple(lt[i, n - 1] for i in range(n - 1))
    wm, pm2 = coadjoint_to_delta_aff(n - 1, lm, pm)
    am, vm = delta_to_adjoint_aff(n - 1, wm, pm2)
    emb = Matrix.from_rows(
        [list(am.row(i)) + [vm[i]] for i in range(n - 1)] + [[ZERO] * n])
    w = r.inverse() @ emb @ r
    _check_delta(w, p)
    return w, p


def delta_to_coadjoint_aff(n: int, omega: Matrix, p: Vector) -> tuple[Matrix, Vector]:
    """Coadjoint representative (L, p) bijected with the incident pair."""
    if n == 0:
        return Matrix.zeros(0, 0), ()
    _check_delta(omega, p)
    if is_zero_vec(p):
        return omega.transpose(), p
    r = _aff_transport(p)
    w2 = r @ omega @ r.inverse()
    a = w2.submatrix(0, n - 1, 0, n - 1)
    b = tuple(w2[i, n - 1] for i in range(n - 1))
    a2, p2 = adjoint_to_delta_aff(n - 1, a, b)
    lm, _ = delta_to_coadjoint_aff(n - 1, a2, p2)
    lt = Matrix.from_rows(
        [list(lm.row(i)) + [p2[i]] for i in range(n - 1)] + [[ZERO] * n])
    l_mat = r.transpose() @ lt @ r.inverse().transpose()
    return l_mat, p


def _embed_perp(gram: Matrix, u: Vector) -> tuple[Subspace, Matrix, Matrix]:
    """Orthogonal complement of a non-isotropic u with its frame matrices."""
    w = _perp_subspace(gram, [u])
    frame = Matrix.from_cols([u] + w.basis_vectors(), rows=len(u))
    return w, frame, frame.inverse()


def _iota_perp(w: Subspace, frame: Matrix, frame_inv: Matrix, x_hat: Matrix) -> Matrix:
    n = frame.rows
    cols = [zero_vec(n)]
    for i in range(w.dim):
        cols.append(w.basis.apply(x_hat.col(i)))
    return Matrix.from_cols(cols, rows=n) @ frame_inv


def coadjoint_to_delta_orth(gram: Matrix, tau: Vector, p: Vector) -> tuple[Matrix, Vector]:
    """Incident-pair representative for a coadjoint functional at p.

    tau holds the functional's values on the canonical algebra basis.
    """
    n = gram.rows
    if n == 0:
        return Matrix.zeros(0, 0), ()
    if is_zero_vec(p):
        return _kappa_solve(gram, tau), p
    ginv = gram.inverse()
    u = ginv.apply(p)
    c = dot(p, ginv.apply(p))
    if c != 0:
        w, frame, frame_inv = _embed_perp(gram, u)
        bw = w.basis
        gram_w = bw.transpose() @ gram @ bw
        tau_w = tuple(_eval_so_functional(gram, tau, _iota_perp(w, frame, frame_inv, bh))
                      for bh in so_basis(gram_w))
        a_hat = _kappa_solve(gram_w, tau_w)
        omega = _iota_perp(w, frame, frame_inv, a_hat)
        _check_delta(omega, p)
        return omega, p
    fr = _null_frame(gram, u)
    basis_w = so_basis(fr.gram_w)
    tau_w = tuple(_eval_so_functional(gram, tau, _null_compose(fr, bh, zero_vec(fr.w.dim), gram))
                  for bh in basis_w)
    p_hat = tuple(_eval_so_functional(
        gram, tau, _null_compose(fr, Matrix.zeros(fr.w.dim, fr.w.dim),
                                 basis_vec(fr.w.dim, i), gram))
        for i in range(fr.w.dim))
    wm, pm = coadjoint_to_delta_orth(fr.gram_w, tau_w, p_hat)
    am, vm = delta_to_adjoint_orth(fr.gram_w, wm, pm)
    omega = _null_compose(fr, am, vm, gram)
    _check_delta(omega, p)
    return omega, p


def delta_to_coadjoint_orth(gram: Matrix, omega: Matrix, p: Vector) -> Vector:
    """Functional values (on the algebra basis) of a coadjoint representative."""
    n = gram.rows
    if n == 0:
        return ()
    _check_delta(omega, p)
    if is_zero_vec(p):
        return tuple((omega @ b).trace() for b in so_basis(gram))
    stab = _stab_algebra_basis(gram, p)
    ginv = gram.inverse()
    c = dot(p, ginv.apply(p))
    if c != 0:
        little_values = tuple((omega @ cq).trace() for cq in stab)
        return _extend_functional(gram, stab, little_values)
    u = ginv.apply(p)
    fr = _null_frame(gram, u)
    a, c_w = _null_decompose(fr, omega)
    a2, p2 = adjoint_to_delta_orth(fr.gram_w, a, c_w)
    tau_w = delta_to_coadjoint_orth(fr.gram_w, a2, p2)
    little_values = []
    for cq in stab:
        aq, cq_w = _null_decompose(fr, cq)
        little_values.append(_eval_so_functional(fr.gram_w, tau_w, aq) + dot(p2, cq_w))
    return _extend_functional(gram, stab, tuple(little_values))


def classify_coadjoint_aff(n: int, l_mat: Matrix, p: Vector) -> OrbitLabel:
    return classify_delta_aff(n, *coadjoint_to_delta_aff(n, l_mat, p))


def classify_coadjoint_orth(gram: Matrix, l_mat: Matrix, p: Vector) -> OrbitLabel:
    tau = _so_values_of_matrix(gram, l_mat)
    return classify_delta_orth(gram, *coadjoint_to_delta_orth(gram, tau, p))


# --- public entry points ------------------------------------------------------------

def classify_adjoint(x: AlgebraElement) -> OrbitLabel:
    """Label of the incident-pair orbit corresponding to the adjoint orbit of x."""
    if x.kind.family == "affine":
        return classify_adjoint_aff(x.kind.n, x.omega, x.v)
    return classify_adjoint_orth(x.kind.form(), x.omega, x.v)


def classify_coadjoint(xi: DualAlgebraElement) -> OrbitLabel:
    """Label of the incident-pair orbit corresponding to the coadjoint orbit of xi."""
    if xi.kind.family == "affine":
        return classify_coadjoint_aff(xi.kind.n, xi.L, xi.p)
    return classify_coadjoint_orth(xi.kind.form(), xi.L, xi.p)


def classify_delta(omega: Matrix, p: Vector, kind: GroupKind) -> OrbitLabel:
    """Label of the orbit through an incident pair (omega^T p = 0 required)."""
    if kind.family == "affine":
        return classify_delta_aff(kind.n, omega, p)
    q = kind.form()
    if not is_skew_adjoint(omega, q):
        raise InvariantViolation("operator is not skew self-adjoint for the form")
    return classify_delta_orth(q, omega, p)


def adjoint_to_delta(x: AlgebraElement) -> tuple[Matrix, Vector]:
    if x.kind.family == "affine":
        return adjoint_to_delta_aff(x.kind.n, x.omega, x.v)
    return adjoint_to_delta_orth(x.kind.form(), x.omega, x.v)


def delta_to_adjoint(omega: Matrix, p: Vector, kind: GroupKind) -> AlgebraElement:
    if kind.family == "affine":
        w, v = delta_to_adjoint_aff(kind.n, omega, p)
    else:
        w, v = delta_to_adjoint_orth(kind.form(), omega, p)
    return AlgebraElement(kind, w, v)


def delta_to_coadjoint(omega: Matrix, p: Vector, kind: GroupKind) -> DualAlgebraElement:
    if kind.family == "affine":
        l_mat, p2 = delta_to_coadjoint_aff(kind.n, omega, p)
    else:
        gram = kind.form()
        tau = delta_to_coadjoint_orth(gram, omega, p)
        l_mat, p2 = _so_matrix_from_values(gram, tau), p
    return DualAlgebraElement(kind, l_mat, p2)


def bijection_pair(x: AlgebraElement) -> DualAlgebraElement:
    """A coadjoint representative of the orbit bijected with the orbit of x."""
    omega, p = adjoint_to_delta(x)
    return delta_to_coadjoint(omega, p, x.kind)


def delta_act(r: Matrix, omega: Matrix, p: Vector, kind: GroupKind) -> tuple[Matrix, Vector]:
    """Diagonal action of the linear part on incident pairs."""
    q = kind.form()
    if q is not None and not (r.transpose() @ q @ r == q):
        raise InvariantViolation("matrix does not preserve the form")
    return r @ omega @ r.inverse(), r.inverse().transpose().apply(p)


# --- hierarchies and the table -------------------------------------------------------

def enumerate_hierarchy(kind: GroupKind) -> HierarchyNode:
    """Orbit-type recursion tree with the closed-form leaves."""
    if kind.family == "affine":
        return _affine_tree(kind.n)
    return _poincare_tree(kind.m, kind.n)


def _affine_tree(n: int) -> HierarchyNode:
    if n == 1:
        return HierarchyNode("Delta(1)")
    return HierarchyNode(f"Delta({n})",
                         (HierarchyNode(f"gl({n})"), _affine_tree(n - 1)))


def _poincare_tree(m: int, n: int) -> HierarchyNode:
    if m == 0 and n == 0:
        return HierarchyNode("Delta(0,0)")
    children = [HierarchyNode(f"so({m},{n})")]
    if m >= 1:
        children.append(HierarchyNode(f"so({m - 1},{n})xR+_t"))
    if n >= 1:
        children.append(HierarchyNode(f"so({m},{n - 1})xR+_s"))
    if m >= 1 and n >= 1:
        children.append(_poincare_tree(m - 1, n - 1))
    return HierarchyNode(f"Delta({m},{n})", tuple(children))


E13_TABLE = (
    {"group": "O(1,3)", "params": "zeta", "constraints": "Im(zeta) != 0"},
    {"group": "O(1,3)", "params": "zeta", "constraints": "Im(zeta) = 0, Re(zeta) > 0"},
    {"group": "O(1,3)", "params": "zeta", "constraints": "Im(zeta) = 0, Re(zeta) < 0"},
    {"group": "O(1,3)", "params": "zeta = 0", "constraints": "xi = 0"},
    {"group": "O(1,3)", "params": "N2", "constraints": "zeta = 0, xi nilpotent nonzero"},
    {"group": "O(3)xR+_t", "params": "(t, rho)", "constraints": "t > 0, rho > 0"},
    {"group": "O(3)xR+_t", "params": "(t, 0)", "constraints": "t > 0, rho = 0"},
    {"group": "O(1,2)xR+_s", "params": "(s, c)", "constraints": "s > 0, c > 0"},
    {"group": "O(1,2)xR+_s", "params": "(s, c)", "constraints": "s > 0, c < 0"},
    {"group": "O(1,2)xR+_s", "params": "(s, 0)", "constraints": "s > 0, c = 0, v = 0"},
    {"group": "O(1,2)xR+_s", "params": "(s, null)", "constraints": "s > 0, v nonzero null"},
    {"group": "O(2)", "params": "x", "constraints": "x > 0"},
    {"group": "O(2)", "params": "x", "constraints": "x = 0"},
    {"group": "O(1)xR+_s", "params": "s", "constraints": "s > 0"},
)


def e13_table() -> list[dict]:
    """The fourteen orbit-type rows for the 1+3 case, in five groups."""
    return [dict(row) for row in E13_TABLE]
