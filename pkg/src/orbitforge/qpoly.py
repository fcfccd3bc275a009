"""Univariate polynomials over Q and Smith form of polynomial matrices.

Just enough for similarity invariants: the invariant factors of xI - A are
a complete conjugation invariant of a square rational matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatch
from .linalg import Matrix, ZERO, ONE, frac


def _trim(coeffs: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return coeffs[:n]


@dataclass(frozen=True)
class QPoly:
    """Polynomial with Fraction coefficients, stored low degree first."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(*coeffs) -> "QPoly":
        return QPoly(_trim(tuple(frac(c) for c in coeffs)))

    @staticmethod
    def zero() -> "QPoly":
        return QPoly(())

    @staticmethod
    def one() -> "QPoly":
        return QPoly((ONE,))

    @staticmethod
    def x() -> "QPoly":
        return QPoly((ZERO, ONE))

    @staticmethod
    def constant(c) -> "QPoly":
        return QPoly.of(c)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        if self.is_zero():
            raise ZeroDivisionError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def monic(self) -> "QPoly":
        if self.is_zero():
            return self
        lead = self.leading()
        return QPoly(tuple(c / lead for c in self.coeffs))

    def __add__(self, other: "QPoly") -> "QPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (n - len(other.coeffs))
        return QPoly(_trim(tuple(x + y for x, y in zip(a, b))))

    def __neg__(self) -> "QPoly":
        return QPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + (-other)

    def __mul__(self, other: "QPoly") -> "QPoly":
        if self.is_zero() or other.is_zero():
            return QPoly.zero()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return QPoly(_trim(tuple(out)))

    def scale(self, c) -> "QPoly":
        c = frac(c)
        return QPoly(_trim(tuple(c * x for x in self.coeffs)))

    def divmod(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [ZERO] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        od, olead = other.degree, other.leading()
        while len(rem) - 1 >= od and any(c != 0 for c in rem):
            rd = len(rem) - 1
            while rd >= 0 and rem[rd] == 0:
                rd -= 1
            if rd < od:
                break
            f = rem[rd] / olead
            q[rd - od] = f
            for i, c in enumerate(other.coeffs):
                rem[rd - od + i] -= f * c
        return QPoly(_trim(tuple(q))), QPoly(_trim(tuple(rem)))

    def __mod__(self, other: "QPoly") -> "QPoly":
        return self.divmod(other)[1]

    def divides(self, other: "QPoly") -> bool:
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def eval(self, x) -> Fraction:
        x = frac(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*x" if c != 1 else "x")
            else:
                parts.append(f"{c}*x^{i}" if c != 1 else f"x^{i}")
        return " + ".join(reversed(parts))


def poly_gcd(a: QPoly, b: QPoly) -> QPoly:
    """Monic greatest common divisor."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def char_matrix(a: Matrix) -> list[list[QPoly]]:
    """The polynomial matrix xI - a."""
    if not a.is_square():
        raise DimensionMismatch("characteristic matrix of a non-square matrix")
    n = a.rows
    x = QPoly.x()
    return [[(x if i == j else QPoly.zero()) - QPoly.constant(a[i, j])
             for j in range(n)] for i in range(n)]


def smith_invariant_factors(mat: list[list[QPoly]]) -> tuple[QPoly, ...]:
    """Invariant factors d_1 | d_2 | ... of a square polynomial matrix.

    Classic elimination: move a minimal-degree entry to the pivot, kill its
    row and column by division with remainder, and repair divisibility of the
    trailing block before recursing. All factors are returned monic (the
    input here is always non-singular, so none are zero).
    """
    n = len(mat)
    work = [row[:] for row in mat]
    result: list[QPoly] = []
    for t in range(n):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    if not work[i][j].is_zero():
                        if best is None or work[i][j].degree < work[best[0]][best[1]].degree:
                            best = (i, j)
            if best is None:
                result.append(QPoly.zero())
                break
            bi, bj = best
            if bi != t:
                work[t], work[bi] = work[bi], work[t]
            if bj != t:
                for row in work:
                    row[t], row[bj] = row[bj], row[t]
            pivot = work[t][t]
            dirty = False
            for i in range(t + 1, n):
                if not work[i][t].is_zero():
                    q, _ = work[i][t].divmod(pivot)
                    for j in range(t, n):
                        work[i][j] = work[i][j] - q * work[t][j]
                    dirty = dirty or not work[i][t].is_zero()
            for j in range(t + 1, n):
                if not work[t][j].is_zero():
                    q, _ = work[t][j].divmod(pivot)
                    for i in range(t, n):
                        work[i][j] = work[i][j] - q * work[i][t]
                    dirty = dirty or not work[t][j].is_zero()
            if dirty:
                continue
            offender = None
            for i in range(t + 1, n):
                for j in range(t + 1, n):
                    if not pivot.divides(work[i][j]):
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                result.append(pivot.monic())
                break
            for j in range(t, n):
                work[t][j] = work[t][j] + work[offender][j]
    return tuple(result)


def invariant_factors(a: Matrix) -> tuple[QPoly, ...]:
    """Invariant factors of xI - a, a complete similarity invariant."""
    if a.rows == 0:
        return ()
    return smith_invariant_factors(char_matrix(a))


def char_poly(a: Matrix) -> QPoly:
    """Characteristic polynomial via Newton's identities (trace powers)."""
    n = a.rows
    if n == 0:
        return QPoly.one()
    pk = []
    m = Matrix.identity(n)
    for _ in range(n):
        m = m @ a
        pk.append(m.trace())
    e = [ONE]
    for k in range(1, n + 1):
        acc = ZERO
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * pk[i - 1]
        e.append(acc / k)
    coeffs = [(-1) ** k * e[k] for k in range(n + 1)]
    return QPoly(tuple(reversed([frac(c) for c in coeffs])))
