"""Semidirect products H x| V for H = GL(n) or an indefinite orthogonal group.

Conventions, fixed once and used everywhere:

* V = Q^N as column vectors; V* is stored in dual standard-basis
  coordinates, so a dual vector p acts by <p, v> = p^T v.
* The group acts on V* by the contragredient r |-> r^{-T}; on the algebra
  side the dual map omega* has matrix omega^T.
* h* is represented by matrices with the pairing <L, omega> = Tr(L^T omega);
  for the orthogonal kinds L is constrained to the same matrix space as
  omega (the self-dual identification of the algebra).
* The moment-type map mu is pinned down by <mu(p, v), omega> = <p, omega v>
  for every omega in h, which makes the coadjoint formula an exact left
  action and the annihilator identity span mu(p, V) = (h_p)^0 hold on the
  nose.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatch, InvariantViolation
from .linalg import (Matrix, Subspace, Vector, ZERO, dot, frac, is_zero_vec,
                     kernel, vec, zero_vec)


@dataclass(frozen=True)
class GroupKind:
    """Affine(n) = GL(n) x| Q^n, or Poincare(m, n) = O(m, n) x| Q^(m+n)."""

    family: str  # "affine" | "poincare"
    m: int = 0
    n: int = 0

    def __post_init__(self):
        if self.family == "affine":
            if self.n < 1:
                raise InvariantViolation("affine kind needs n >= 1")
        elif self.family == "poincare":
            if self.m < 0 or self.n < 0 or self.m + self.n < 1:
                raise InvariantViolation("poincare kind needs m, n >= 0 and m + n >= 1")
        else:
            raise InvariantViolation(f"unknown group family {self.family!r}")

    @property
    def dim(self) -> int:
        """Dimension of the translation space V."""
        return self.n if self.family == "affine" else self.m + self.n

    def form(self) -> Matrix | None:
        """diag(+1 x m, -1 x n) for the orthogonal kinds, None for affine."""
        if self.family == "affine":
            return None
        return Matrix.diagonal([1] * self.m + [-1] * self.n)

    def describe(self) -> str:
        if self.family == "affine":
            return f"affine:{self.n}"
        return f"poincare:{self.m},{self.n}"

    def to_json(self) -> dict:
        if self.family == "affine":
            return {"affine": self.n}
        return {"poincare": [self.m, self.n]}

    @staticmethod
    def from_json(obj: dict) -> "GroupKind":
        if "affine" in obj:
            return affine(int(obj["affine"]))
        if "poincare" in obj:
            m, n = obj["poincare"]
            return poincare(int(m), int(n))
        raise InvariantViolation("unrecognized group kind")


def affine(n: int) -> GroupKind:
    return GroupKind("affine", n=n)


def poincare(m: int, n: int) -> GroupKind:
    return GroupKind("poincare", m=m, n=n)


def _check_shape(kind: GroupKind, mat: Matrix, what: str):
    d = kind.dim
    if mat.shape != (d, d):
        raise DimensionMismatch(f"{what} must be {d}x{d} for {kind.describe()}")


def is_isometry(r: Matrix, g: Matrix) -> bool:
    return r.transpose() @ g @ r == g


def is_skew_adjoint(w: Matrix, g: Matrix) -> bool:
    return (w.transpose() @ g + g @ w).is_zero()


@dataclass(frozen=True)
class GroupElement:
    kind: GroupKind
    r: Matrix
    d: Vector

    def __post_init__(self):
        _check_shape(self.kind, self.r, "group matrix")
        if len(self.d) != self.kind.dim:
            raise DimensionMismatch("translation vector of wrong length")
        if self.r.det() == 0:
            raise InvariantViolation("group matrix must be invertible")
        q = self.kind.form()
        if q is not None and not is_isometry(self.r, q):
            raise InvariantViolation("matrix does not preserve the form exactly")

    def inverse(self) -> "GroupElement":
        rinv = self.r.inverse()
        return GroupElement(self.kind, rinv, tuple(-x for x in rinv.apply(self.d)))

    def compose(self, other: "GroupElement") -> "GroupElement":
        """Group law (r1, d1)(r2, d2) = (r1 r2, r1 d2 + d1)."""
        if self.kind != other.kind:
            raise DimensionMismatch("composition across different group kinds")
        from .linalg import vec_add
        return GroupElement(self.kind, self.r @ other.r,
                            vec_add(self.r.apply(other.d), self.d))

    @staticmethod
    def identity(kind: GroupKind) -> "GroupElement":
        return GroupElement(kind, Matrix.identity(kind.dim), zero_vec(kind.dim))

    def to_json(self) -> dict:
        return {"r": _mat_json(self.r), "d": _vec_json(self.d)}


@dataclass(frozen=True)
class AlgebraElement:
    kind: GroupKind
    omega: Matrix
    v: Vector

    def __post_init__(self):
        _check_shape(self.kind, self.omega, "algebra matrix")
        if len(self.v) != self.kind.dim:
            raise DimensionMismatch("algebra vector of wrong length")
        q = self.kind.form()
        if q is not None and not is_skew_adjoint(self.omega, q):
            raise InvariantViolation("algebra matrix is not skew self-adjoint")

    def to_json(self) -> dict:
        return {"omega": _mat_json(self.omega), "v": _vec_json(self.v)}


@dataclass(frozen=True)
class DualAlgebraElement:
    kind: GroupKind
    L: Matrix
    p: Vector

    def __post_init__(self):
        _check_shape(self.kind, self.L, "dual algebra matrix")
        if len(self.p) != self.kind.dim:
            raise DimensionMismatch("dual vector of wrong length")
        q = self.kind.form()
        if q is not None and not is_skew_adjoint(self.L, q):
            raise InvariantViolation(
                "dual matrix must live in the self-dual algebra representation")

    def to_json(self) -> dict:
        return {"L": _mat_json(self.L), "p": _vec_json(self.p)}


@dataclass(frozen=True)
class SigmaPoint:
    """A pair (omega, x) with x a functional on ker(omega^T).

    x is stored as coordinates against the canonical basis of the kernel.
    """

    omega: Matrix
    kernel: Subspace
    x: Vector


@dataclass(frozen=True)
class PiPoint:
    """A pair (l, p) with l a functional on the little algebra of p."""

    p: Vector
    little: Subspace  # flattened little algebra
    l: Vector


def full_pairing(xi: DualAlgebraElement, x: AlgebraElement) -> Fraction:
    """<(L, p), (omega, v)> = Tr(L^T omega) + p^T v."""
    return (xi.L.transpose() @ x.omega).trace() + dot(xi.p, x.v)


def adjoint_act(g: GroupElement, x: AlgebraElement) -> AlgebraElement:
    """(r, d) . (omega, v) = (r omega r^-1, r v - (r omega r^-1) d)."""
    if g.kind != x.kind:
        raise DimensionMismatch("group kind mismatch")
    w = g.r @ x.omega @ g.r.inverse()
    from .linalg import vec_sub
    return AlgebraElement(x.kind, w, vec_sub(g.r.apply(x.v), w.apply(g.d)))


def dual_vector_act(r: Matrix, p: Vector) -> Vector:
    """Contragredient action r . p = r^{-T} p in dual coordinates."""
    return r.inverse().transpose().apply(p)


def coadjoint_act(g: GroupElement, xi: DualAlgebraElement) -> DualAlgebraElement:
    """(r, d) . (L, p) = (Ad*_r L + mu(r.p, d), r.p)."""
    if g.kind != xi.kind:
        raise DimensionMismatch("group kind mismatch")
    rinv_t = g.r.inverse().transpose()
    new_p = rinv_t.apply(xi.p)
    new_l = rinv_t @ xi.L @ g.r.transpose()
    new_l = new_l + mu(new_p, g.d, xi.kind)
    return DualAlgebraElement(xi.kind, new_l, new_p)


@functools.lru_cache(maxsize=None)
def so_subspace(g: Matrix) -> Subspace:
    """Flattened matrices X with X^T g + g X = 0, in canonical form."""
    n = g.rows
    cols = []
    for u in range(n):
        for v in range(n):
            e = Matrix(n, n, tuple(
                tuple(Fraction(1) if (i, j) == (u, v) else ZERO for j in range(n))
                for i in range(n)))
            cols.append((e.transpose() @ g + g @ e).flatten())
    constraint = Matrix.from_cols(cols, rows=n * n)
    return kernel(constraint)


def so_basis(g: Matrix) -> list[Matrix]:
    n = g.rows
    return [Matrix.unflatten(b, n, n) for b in so_subspace(g).basis_vectors()]


def algebra_basis(kind: GroupKind) -> list[Matrix]:
    """Canonical basis of h as matrices (all of gl, or the skew-adjoint ones)."""
    d = kind.dim
    q = kind.form()
    if q is None:
        out = []
        for i in range(d):
            for j in range(d):
                out.append(Matrix(d, d, tuple(
                    tuple(Fraction(1) if (a, b) == (i, j) else ZERO for b in range(d))
                    for a in range(d))))
        return out
    return so_basis(q)


def algebra_subspace(kind: GroupKind) -> Subspace:
    """h as a flattened subspace of Q^(N^2)."""
    d = kind.dim
    q = kind.form()
    if q is None:
        return Subspace.full(d * d)
    return so_subspace(q)


@functools.lru_cache(maxsize=None)
def _frobenius_solver(g: Matrix):
    """Inverse Frobenius Gram matrix of the skew-adjoint algebra of g."""
    basis = so_basis(g)
    gram = Matrix.from_rows(
        [[dot(a.flatten(), b.flatten()) for b in basis] for a in basis])
    return basis, gram.inverse()


def mu(p: Vector, v: Vector, kind: GroupKind) -> Matrix:
    """The unique element of h* with <mu(p,v), omega> = <p, omega v>.

    With the trace pairing this is p v^T for the affine kinds and the
    Frobenius projection of p v^T onto the skew-adjoint algebra otherwise.
    """
    d = kind.dim
    if len(p) != d or len(v) != d:
        raise DimensionMismatch("mu arguments of wrong length")
    outer = Matrix.from_rows([[p[i] * v[j] for j in range(d)] for i in range(d)])
    q = kind.form()
    if q is None:
        return outer
    basis, gram_inv = _frobenius_solver(q)
    rhs = tuple(dot(b.flatten(), outer.flatten()) for b in basis)
    coeffs = gram_inv.apply(rhs)
    out = Matrix.zeros(d, d)
    for c, b in zip(coeffs, basis):
        out = out + b.scale(c)
    return out


def little_algebra(p: Vector, kind: GroupKind) -> Subspace:
    """{omega in h : omega^T p = 0} as a flattened matrix subspace."""
    d = kind.dim
    if len(p) != d:
        raise DimensionMismatch("little_algebra vector of wrong length")
    n2 = d * d
    # rows of the constraint system: (X^T p)_a = sum_i X[i, a] p[i]
    rows = []
    for a in range(d):
        row = [ZERO] * n2
        for i in range(d):
            row[i * d + a] = p[i]
        rows.append(row)
    q = kind.form()
    if q is not None:
        # (X^T q + q X)_{ab} = sum_i X[i,a] q[i,b] + sum_i q[a,i] X[i,b]
        for a in range(d):
            for b in range(d):
                row = [ZERO] * n2
                for i in range(d):
                    row[i * d + a] += q[i, b]
                for i in range(d):
                    row[i * d + b] += q[a, i]
                rows.append(row)
    return kernel(Matrix.from_rows(rows))


def little_algebra_basis(p: Vector, kind: GroupKind) -> list[Matrix]:
    d = kind.dim
    return [Matrix.unflatten(b, d, d) for b in little_algebra(p, kind).basis_vectors()]


def project_to_sigma(x: AlgebraElement) -> SigmaPoint:
    """Send (omega, v) to (omega, x) with x(q) = <q, v> on ker(omega^T).

    The functional depends on v only through its class modulo the image
    of omega.
    """
    k = kernel(x.omega.transpose())
    coords = tuple(dot(q, x.v) for q in k.basis_vectors())
    return SigmaPoint(x.omega, k, coords)


def project_to_pi(xi: DualAlgebraElement) -> PiPoint:
    """Send (L, p) to (l, p), l the restriction of <L, .> to the little algebra."""
    little = little_algebra(xi.p, xi.kind)
    lflat = xi.L.flatten()
    coords = tuple(dot(lflat, b) for b in little.basis_vectors())
    return PiPoint(xi.p, little, coords)


@dataclass(frozen=True)
class VectorClass:
    """Orbit class of a vector: zero/nonzero, or the sign class with the
    exact form value in the orthogonal case."""

    tag: str
    value: Fraction | None = None

    def to_json(self) -> dict:
        out = {"class": self.tag}
        if self.value is not None:
            out["value"] = _frac_json(self.value)
        return out


def vector_orbit_class(v: Vector, kind: GroupKind) -> VectorClass:
    if len(v) != kind.dim:
        raise DimensionMismatch("vector of wrong length")
    if kind.family == "affine":
        return VectorClass("zero" if is_zero_vec(v) else "nonzero")
    if is_zero_vec(v):
        return VectorClass("zero")
    q = kind.form()
    c = dot(v, q.apply(v))
    if c > 0:
        return VectorClass("timelike", c)
    if c < 0:
        return VectorClass("spacelike", c)
    return VectorClass("null-nonzero")


# --- JSON helpers shared by the element types -------------------------------

def _frac_json(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _vec_json(v: Vector) -> list[str]:
    return [_frac_json(x) for x in v]


def _mat_json(m: Matrix) -> list[list[str]]:
    return [[_frac_json(x) for x in row] for row in m.entries]


def mat_from_lists(rows) -> Matrix:
    return Matrix.from_rows([[frac(x) for x in row] for row in rows])


def vec_from_list(xs) -> Vector:
    return vec(xs)
