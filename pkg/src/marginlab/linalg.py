"""Dense exact linear algebra over rationals.

Vectors are tuples of rationals, matrices are tuples of row tuples.
Everything is immutable and safe to share; functions never mutate
their arguments.
"""
from __future__ import annotations

from math import gcd
from typing import Iterable, Sequence

from .errors import StructuralError
from .rationals import ONE, ZERO, Rational, rat

Vector = tuple
Matrix = tuple


def vec(values: Iterable) -> Vector:
    return tuple(rat(v) for v in values)


def mat(rows: Iterable[Iterable]) -> Matrix:
    out = tuple(vec(row) for row in rows)
    if out and any(len(row) != len(out[0]) for row in out):
        raise StructuralError("ragged matrix")
    return out


def zeros(n: int) -> Vector:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


def identity(n: int) -> Matrix:
    return tuple(unit(n, i) for i in range(n))


def dot(u: Sequence, v: Sequence) -> Rational:
    if len(u) != len(v):
        raise StructuralError("vector length mismatch: %d vs %d" % (len(u), len(v)))
    total = ZERO
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


def mat_vec(a: Matrix, x: Sequence) -> Vector:
    return tuple(dot(row, x) for row in a)


def vec_add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Rational, u: Sequence) -> Vector:
    return tuple(c * a for a in u)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def outer(u: Sequence, v: Sequence) -> Matrix:
    return tuple(tuple(a * b for b in v) for a in u)


def _integer_rows(a: Matrix) -> list[list[int]]:
    # Scaling each row by the lcm of its denominators preserves rank.
    rows = []
    for row in a:
        scale = 1
        for x in row:
            d = int(rat(x).denominator)
            scale = scale * d // gcd(scale, d)
        rows.append([int(rat(x).numerator) * (scale // int(rat(x).denominator)) for x in row])
    return rows


def rank(a: Matrix) -> int:
    """Exact rank by fraction-free (Bareiss) elimination on scaled integer rows."""
    rows = _integer_rows(mat(a))
    m = len(rows)
    if m == 0:
        return 0
    n = len(rows[0])
    r = 0
    prev = 1
    for c in range(n):
        pivot = next((i for i in range(r, m) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][c]
        for i in range(r + 1, m):
            fi = rows[i][c]
            if fi:
                row_i, row_r = rows[i], rows[r]
                for j in range(c + 1, n):
                    row_i[j] = (row_i[j] * lead - fi * row_r[j]) // prev
                row_i[c] = 0
            else:
                row_i = rows[i]
                for j in range(c + 1, n):
                    row_i[j] = (row_i[j] * lead) // prev
        prev = lead
        r += 1
        if r == m:
            break
    return r


class Echelon:
    """Incremental row-echelon accumulator for augmented rows ``[a | b]``.

    Supports exact rank tracking, consistency detection, O(1) rollback of
    the most recent additions, and back-substitution once the coefficient
    rank reaches the ambient dimension.  Stored rows are never modified by
    later additions, which is what makes rollback trivial.
    """

    ADDED = "added"
    DEPENDENT = "dependent"
    INCONSISTENT = "inconsistent"

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list] = []     # normalized, leading coefficient 1
        self.pivots: list[int] = []    # pivot column of each stored row

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, row: Sequence, rhs: Rational) -> list:
        work = list(row) + [rhs]
        for stored, p in zip(self.rows, self.pivots):
            f = work[p]
            if f:
                for j in range(p, self.dim + 1):
                    s = stored[j]
                    if s:
                        work[j] -= f * s
        return work

    def add(self, row: Sequence, rhs: Rational) -> str:
        """Try to add ``row . x = rhs``; report whether rank grew."""
        work = self._reduce(row, rhs)
        p = next((j for j in range(self.dim) if work[j]), None)
        if p is None:
            return self.DEPENDENT if not work[self.dim] else self.INCONSISTENT
        lead = work[p]
        if lead != 1:
            inv = 1 / lead
            work = [w * inv if w else w for w in work]
        self.rows.append(work)
        self.pivots.append(p)
        return self.ADDED

    def pop(self) -> None:
        self.rows.pop()
        self.pivots.pop()

    def solution(self) -> Vector:
        """Unique solution of the accumulated system; requires full rank."""
        if self.rank != self.dim:
            raise StructuralError("system is not of full rank")
        x = [ZERO] * self.dim
        order = sorted(range(len(self.rows)), key=lambda i: self.pivots[i], reverse=True)
        for i in order:
            row, p = self.rows[i], self.pivots[i]
            acc = row[self.dim]
            for j in range(p + 1, self.dim):
                if row[j] and x[j]:
                    acc -= row[j] * x[j]
            x[p] = acc
        return tuple(x)


def solve_unique(a: Matrix, b: Sequence) -> Vector | None:
    """Solve ``a x = b`` when the solution exists and is unique, else None.

    Accepts any number of rows; None means singular (rank-deficient) or
    inconsistent.
    """
    a = mat(a)
    b = vec(b)
    if len(a) != len(b):
        raise StructuralError("row count of A and length of b differ")
    n = len(a[0]) if a else 0
    ech = Echelon(n)
    for row, rhs in zip(a, b):
        if ech.add(row, rhs) == Echelon.INCONSISTENT:
            return None
    if ech.rank != n:
        return None
    return ech.solution()


def solve_linear_system(a: Matrix, b: Sequence) -> Vector | None:
    """Exact solution of a square system, or None if the matrix is singular."""
    a = mat(a)
    if a and len(a) != len(a[0]):
        raise StructuralError("matrix must be square")
    if len(a) != len(b):
        raise StructuralError("row count of A and length of b differ")
    return solve_unique(a, b)
