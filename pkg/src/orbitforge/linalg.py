"""Exact dense linear algebra over the rationals.

Everything downstream (flags, annihilators, quotient forms, orbit labels)
reduces to the operations in this module, so they are all exact: entries are
`fractions.Fraction`, subspaces are stored in a canonical reduced echelon
form, and equality of subspaces is literal equality of representations.

Intended scale is small dense matrices (dimension <= ~25).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatch, MembershipError

Vector = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    """Coerce ints, 'num/den' strings and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def vec(values) -> Vector:
    return tuple(frac(x) for x in values)


def zero_vec(n: int) -> Vector:
    return (ZERO,) * n


def basis_vec(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


def vec_add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vec_sub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vec_scale(c: Fraction, a: Vector) -> Vector:
    return tuple(c * x for x in a)


def dot(a: Vector, b: Vector) -> Fraction:
    return sum((x * y for x, y in zip(a, b, strict=True)), ZERO)


def is_zero_vec(a: Vector) -> bool:
    return all(x == 0 for x in a)


@dataclass(frozen=True)
class Matrix:
    """Immutable dense rational matrix, row-major."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def from_rows(rows) -> "Matrix":
        data = tuple(tuple(frac(x) for x in row) for row in rows)
        r = len(data)
        c = len(data[0]) if r else 0
        if any(len(row) != c for row in data):
            raise DimensionMismatch("ragged rows")
        return Matrix(r, c, data)

    @staticmethod
    def from_cols(cols, rows: int | None = None) -> "Matrix":
        cols = [vec(c) for c in cols]
        if cols:
            rows = len(cols[0])
        elif rows is None:
            raise DimensionMismatch("empty column list needs an explicit row count")
        return Matrix(rows, len(cols),
                      tuple(tuple(col[i] for col in cols) for i in range(rows)))

    @staticmethod
    def zeros(r: int, c: int) -> "Matrix":
        return Matrix(r, c, tuple((ZERO,) * c for _ in range(r)))

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix(n, n, tuple(basis_vec(n, i) for i in range(n)))

    @staticmethod
    def diagonal(values) -> "Matrix":
        d = vec(values)
        n = len(d)
        return Matrix(n, n, tuple(
            tuple(d[i] if i == j else ZERO for j in range(n)) for i in range(n)))

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def col(self, j: int) -> Vector:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def columns(self) -> list[Vector]:
        return [self.col(j) for j in range(self.cols)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      tuple(self.col(j) for j in range(self.cols)))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"add {self.shape} vs {other.shape}")
        return Matrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(ra, rb))
            for ra, rb in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols,
                      tuple(tuple(-x for x in row) for row in self.entries))

    def scale(self, c) -> "Matrix":
        c = frac(c)
        return Matrix(self.rows, self.cols,
                      tuple(tuple(c * x for x in row) for row in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"matmul {self.shape} vs {other.shape}")
        ot = other.transpose().entries
        return Matrix(self.rows, other.cols, tuple(
            tuple(dot(row, ocol) for ocol in ot) for row in self.entries))

    def apply(self, v: Vector) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatch(f"apply {self.shape} to vector of length {len(v)}")
        return tuple(dot(row, v) for row in self.entries)

    def power(self, k: int) -> "Matrix":
        if not self.is_square():
            raise DimensionMismatch("power of a non-square matrix")
        out = Matrix.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack row mismatch")
        return Matrix(self.rows, self.cols + other.cols, tuple(
            ra + rb for ra, rb in zip(self.entries, other.entries)))

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix(r1 - r0, c1 - c0, tuple(
            tuple(self.entries[i][j] for j in range(c0, c1)) for i in range(r0, r1)))

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form together with the pivot columns."""
        rows = [list(r) for r in self.entries]
        pivots: list[int] = []
        pr = 0
        for pc in range(self.cols):
            piv = None
            for i in range(pr, self.rows):
                if rows[i][pc] != 0:
                    piv = i
                    break
            if piv is None:
                continue
            rows[pr], rows[piv] = rows[piv], rows[pr]
            inv = 1 / rows[pr][pc]
            rows[pr] = [x * inv for x in rows[pr]]
            for i in range(self.rows):
                if i != pr and rows[i][pc] != 0:
                    c = rows[i][pc]
                    rows[i] = [a - c * b for a, b in zip(rows[i], rows[pr])]
            pivots.append(pc)
            pr += 1
            if pr == self.rows:
                break
        return Matrix(self.rows, self.cols, tuple(tuple(r) for r in rows)), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self) -> Fraction:
        if not self.is_square():
            raise DimensionMismatch("determinant of a non-square matrix")
        n = self.rows
        rows = [list(r) for r in self.entries]
        det = ONE
        for c in range(n):
            piv = None
            for i in range(c, n):
                if rows[i][c] != 0:
                    piv = i
                    break
            if piv is None:
                return ZERO
            if piv != c:
                rows[c], rows[piv] = rows[piv], rows[c]
                det = -det
            det *= rows[c][c]
            inv = 1 / rows[c][c]
            for i in range(c + 1, n):
                if rows[i][c] != 0:
                    f = rows[i][c] * inv
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
        return det

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise DimensionMismatch("inverse of a non-square matrix")
        n = self.rows
        aug, pivots = self.hstack(Matrix.identity(n)).rref()
        if pivots[:n] != tuple(range(n)):
            raise MembershipError("matrix is singular")
        return aug.submatrix(0, n, n, 2 * n)

    def trace(self) -> Fraction:
        if not self.is_square():
            raise DimensionMismatch("trace of a non-square matrix")
        return sum((self.entries[i][i] for i in range(self.rows)), ZERO)

    def flatten(self) -> Vector:
        """Row-major flattening, the convention used for matrix subspaces."""
        return tuple(x for row in self.entries for x in row)

    @staticmethod
    def unflatten(v: Vector, rows: int, cols: int) -> "Matrix":
        if len(v) != rows * cols:
            raise DimensionMismatch("unflatten size mismatch")
        return Matrix(rows, cols, tuple(
            tuple(v[i * cols + j] for j in range(cols)) for i in range(rows)))

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[str(x.numerator), str(x.denominator)]
                        for row in self.entries for x in row],
        }

    @staticmethod
    def from_json(obj: dict) -> "Matrix":
        r, c = int(obj["rows"]), int(obj["cols"])
        ents = [Fraction(int(num), int(den)) for num, den in obj["entries"]]
        return Matrix.unflatten(tuple(ents), r, c)

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(x) for x in row) for row in self.entries) + "]"


def solve(a: Matrix, b: Vector) -> Vector | None:
    """One exact solution of a x = b, or None if inconsistent.

    Free variables are set to zero, i.e. the minimal-support solution of the
    echelonized system; deterministic for fixed input.
    """
    if len(b) != a.rows:
        raise DimensionMismatch("solve shape mismatch")
    aug = a.hstack(Matrix.from_cols([b]))
    red, pivots = aug.rref()
    if a.cols in pivots:
        return None
    x = [ZERO] * a.cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r, a.cols]
    return tuple(x)


def solve_matrix(a: Matrix, b: Matrix) -> Matrix | None:
    """Columnwise solve of a X = b; None if any column is inconsistent."""
    cols = []
    for j in range(b.cols):
        x = solve(a, b.col(j))
        if x is None:
            return None
        cols.append(x)
    return Matrix.from_cols(cols, rows=a.cols)


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of Q^n in canonical form.

    The basis matrix holds the canonical basis as columns; it is the
    transpose of the RREF of any spanning set, so two Subspace values are
    equal as sets exactly when they are equal as dataclasses.
    """

    ambient_dim: int
    basis: Matrix  # ambient_dim x dim, canonical

    @staticmethod
    def span(ambient_dim: int, vectors) -> "Subspace":
        vectors = [vec(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatch("span vector of wrong length")
        if not vectors:
            return Subspace(ambient_dim, Matrix.zeros(ambient_dim, 0))
        red, pivots = Matrix.from_rows(vectors).rref()
        rows = [red.row(i) for i in range(len(pivots))]
        return Subspace(ambient_dim, Matrix.from_cols(rows, rows=ambient_dim))

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, Matrix.identity(ambient_dim))

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, Matrix.zeros(ambient_dim, 0))

    @property
    def dim(self) -> int:
        return self.basis.cols

    def basis_vectors(self) -> list[Vector]:
        return self.basis.columns()

    def pivots(self) -> tuple[int, ...]:
        out = []
        for j in range(self.basis.cols):
            col = self.basis.col(j)
            out.append(next(i for i, x in enumerate(col) if x != 0))
        return tuple(out)

    def coords(self, v: Vector) -> Vector:
        """Coordinates of v in the canonical basis; raises if v is outside."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("coords length mismatch")
        piv = self.pivots()
        cs = tuple(v[p] for p in piv)
        resid = list(v)
        for c, bcol in zip(cs, self.basis.columns()):
            resid = [r - c * x for r, x in zip(resid, bcol)]
        if any(x != 0 for x in resid):
            raise MembershipError("vector is not in the subspace")
        return cs

    def contains(self, v: Vector) -> bool:
        try:
            self.coords(v)
            return True
        except MembershipError:
            return False

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(b) for b in other.basis_vectors())

    def from_coords(self, c: Vector) -> Vector:
        return self.basis.apply(c)

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "basis": self.basis.to_json()}


def kernel(a: Matrix) -> Subspace:
    """Null space {x : a x = 0} in canonical form."""
    red, pivots = a.rref()
    free = [j for j in range(a.cols) if j not in pivots]
    gens = []
    for f in free:
        v = [ZERO] * a.cols
        v[f] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -red[r, f]
        gens.append(tuple(v))
    return Subspace.span(a.cols, gens)


def image(a: Matrix) -> Subspace:
    """Column space of a in canonical form."""
    return Subspace.span(a.rows, a.columns())


def subspace_sum(u: Subspace, w: Subspace) -> Subspace:
    if u.ambient_dim != w.ambient_dim:
        raise DimensionMismatch("sum of subspaces of different ambient spaces")
    return Subspace.span(u.ambient_dim, u.basis_vectors() + w.basis_vectors())


def intersect(u: Subspace, w: Subspace) -> Subspace:
    """Intersection, via the null space of the stacked basis system."""
    if u.ambient_dim != w.ambient_dim:
        raise DimensionMismatch("intersection of subspaces of different ambient spaces")
    if u.dim == 0 or w.dim == 0:
        return Subspace.zero(u.ambient_dim)
    stacked = u.basis.hstack(-w.basis)
    ker = kernel(stacked)
    gens = [u.basis.apply(k[: u.dim]) for k in ker.basis_vectors()]
    return Subspace.span(u.ambient_dim, gens)


def annihilator(u: Subspace) -> Subspace:
    """Functionals vanishing on u, in dual standard-basis coordinates."""
    if u.dim == 0:
        return Subspace.full(u.ambient_dim)
    return kernel(u.basis.transpose())


def completion_basis(u: Subspace, w: Subspace) -> list[Vector]:
    """Canonical basis vectors of u completing w to u (reps of u/w).

    Deterministic: walks u's canonical basis in order and keeps the vectors
    that enlarge the span. Requires w <= u.
    """
    if not u.contains_subspace(w):
        raise MembershipError("completion requires w <= u")
    chosen: list[Vector] = []
    current = w
    for b in u.basis_vectors():
        if not current.contains(b):
            chosen.append(b)
            current = Subspace.span(u.ambient_dim, current.basis_vectors() + [b])
    return chosen


def quotient_coords(u: Subspace, w: Subspace, v: Vector) -> Vector:
    """Coordinates of the class [v] in u/w, in the deterministic basis.

    The quotient basis is the completion of w's canonical basis to u's.
    Linear in v and zero exactly when v lies in w.
    """
    if not u.contains(v):
        raise MembershipError("vector is not in the larger subspace")
    reps = completion_basis(u, w)
    cols = w.basis_vectors() + reps
    if not cols:
        return ()
    sol = solve(Matrix.from_cols(cols, rows=u.ambient_dim), v)
    if sol is None:
        raise MembershipError("inconsistent quotient system")
    return tuple(sol[w.dim:])


def signature(g: Matrix) -> tuple[int, int]:
    """Signature (plus, minus) of a symmetric non-degenerate form."""
    if not g.is_square() or g != g.transpose():
        raise DimensionMismatch("signature needs a symmetric matrix")
    n = g.rows
    work = [list(r) for r in g.entries]
    plus = minus = 0
    live = list(range(n))
    while live:
        i = next((k for k in live if work[k][k] != 0), None)
        if i is None:
            # all live diagonal entries vanish; mix two coupled rows
            pair = next(((a, b) for a in live for b in live
                         if a != b and work[a][b] != 0), None)
            if pair is None:
                raise MembershipError("degenerate form has no signature")
            a, b = pair
            for k in range(n):
                work[a][k] += work[b][k]
            for k in range(n):
                work[k][a] += work[k][b]
            continue
        d = work[i][i]
        if d > 0:
            plus += 1
        else:
            minus += 1
        live.remove(i)
        for j in live:
            if work[j][i] != 0:
                f = work[j][i] / d
                for k in range(n):
                    work[j][k] -= f * work[i][k]
                for k in range(n):
                    work[k][j] -= f * work[k][i]
    return plus, minus


def restrict_operator(m: Matrix, sub: Subspace) -> Matrix:
    """Matrix of m on an m-invariant subspace, in its canonical basis."""
    target = m @ sub.basis
    res = solve_matrix(sub.basis, target)
    if res is None:
        raise MembershipError("subspace is not invariant under the operator")
    return res


def gram_on(g: Matrix, vectors: list[Vector]) -> Matrix:
    """Gram matrix g(v_i, v_j) of a list of vectors."""
    return Matrix.from_rows(
        [[dot(a, g.apply(b)) for b in vectors] for a in vectors]) \
        if vectors else Matrix.zeros(0, 0)
