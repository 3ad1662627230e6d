"""Exact integer matrices and Smith normal form.

Everything here is arbitrary-precision: entries are Python ints and the
row/column transforms are kept unimodular.  The pivot policy is fixed
(smallest absolute value, ties broken by row-major position) so repeated
runs produce bit-identical transforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    """An immutable integer matrix; the carrier for boundary and relation maps."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows:
            raise ValueError("row count does not match entry grid")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("column count does not match entry grid")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in row) for row in rows)
        if data:
            width = len(data[0])
        elif cols is not None:
            width = cols
        else:
            width = 0
        return cls(len(data), width, data)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple(tuple(0 for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def __getitem__(self, pos: tuple[int, int]) -> int:
        i, j = pos
        return self.entries[i][j]

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        data = tuple(
            tuple(
                sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols))
                for j in range(other.cols)
            )
            for i in range(self.rows)
        )
        return IntMatrix(self.rows, other.cols, data)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.entries else ())

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = [list(row) for row in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(m: IntMatrix) -> int:
    """Rank over the rationals (Gaussian elimination on Fractions)."""
    work = [[Fraction(x) for x in row] for row in m.entries]
    r = 0
    for col in range(m.cols):
        pivot_row = None
        for i in range(r, m.rows):
            if work[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        pv = work[r][col]
        for i in range(r + 1, m.rows):
            if work[i][col] != 0:
                f = work[i][col] / pv
                for j in range(col, m.cols):
                    work[i][j] -= f * work[r][j]
        r += 1
        if r == m.rows:
            break
    return r


@dataclass(frozen=True)
class SmithNormalForm:
    """diag with d1 | d2 | ..., and unimodular L, R with L*M*R = diag(diag)."""

    diagonal: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix

    @property
    def nonzero(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d != 0)

    @property
    def rank(self) -> int:
        return len(self.nonzero)


def _find_pivot(a: list[list[int]], s: int, rows: int, cols: int) -> tuple[int, int] | None:
    best = None
    best_val = None
    for i in range(s, rows):
        for j in range(s, cols):
            v = abs(a[i][j])
            if v != 0 and (best_val is None or v < best_val):
                best = (i, j)
                best_val = v
    return best


def smith_normal_form(m: IntMatrix) -> SmithNormalForm:
    """Smith normal form with transforms.

    Pivots are chosen by smallest absolute value, ties by row-major
    position, which pins down the (non-unique) transforms.
    """
    rows, cols = m.rows, m.cols
    a = [list(row) for row in m.entries]
    left = [list(row) for row in IntMatrix.identity(rows).entries]
    right = [list(row) for row in IntMatrix.identity(cols).entries]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def row_add(dst, src, q):
        # row dst += q * row src
        arow, lsrc = a[src], left[src]
        for k in range(cols):
            a[dst][k] += q * arow[k]
        for k in range(rows):
            left[dst][k] += q * lsrc[k]

    def col_add(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in right:
            row[dst] += q * row[src]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        left[i] = [-x for x in left[i]]

    s = 0
    limit = min(rows, cols)
    while s < limit:
        pos = _find_pivot(a, s, rows, cols)
        if pos is None:
            break
        row_swap(s, pos[0])
        col_swap(s, pos[1])
        if a[s][s] < 0:
            row_negate(s)
        d = a[s][s]
        # one euclidean pass over column s and row s; leftover remainders
        # are strictly smaller pivots, so restart the stage on them
        # (re-pivoting only between passes keeps entry growth tame)
        touched = False
        for i in range(s + 1, rows):
            if a[i][s] != 0:
                row_add(i, s, -(a[i][s] // d))
                if a[i][s] != 0:
                    touched = True
        for j in range(s + 1, cols):
            if a[s][j] != 0:
                col_add(j, s, -(a[s][j] // d))
                if a[s][j] != 0:
                    touched = True
        if touched:
            continue
        # enforce divisibility of the remaining block by the pivot
        offender = None
        for i in range(s + 1, rows):
            for j in range(s + 1, cols):
                if a[i][j] % d != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_add(s, offender, 1)
            continue
        s += 1

    diag = tuple(a[i][i] if i < cols else 0 for i in range(limit))
    return SmithNormalForm(diag, IntMatrix.from_rows(left, rows), IntMatrix.from_rows(right, cols))


def invariant_factors_by_minors(m: IntMatrix) -> tuple[int, ...]:
    """Invariant factors via gcds of k-by-k minors.

    Independent of any reduction path, so it serves as an oracle for
    smith_normal_form on small matrices.
    """
    from itertools import combinations

    limit = min(m.rows, m.cols)
    factors = []
    prev = 1
    for k in range(1, limit + 1):
        g = 0
        for rows_sel in combinations(range(m.rows), k):
            for cols_sel in combinations(range(m.cols), k):
                sub = IntMatrix.from_rows(
                    [[m.entries[i][j] for j in cols_sel] for i in rows_sel]
                )
                g = gcd(g, determinant(sub))
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            break
        factors.append(g // prev)
        prev = g
    factors += [0] * (limit - len(factors))
    return tuple(factors)


def is_unimodular(m: IntMatrix) -> bool:
    return m.rows == m.cols and abs(determinant(m)) == 1
