"""Exact rank, determinants and kernels via fraction-free elimination.

Rational rows are first scaled to integers (one lcm per row), then reduced
with Bareiss elimination, so every intermediate entry is an integer minor.
Divisions by pivots happen only in back-substitution when a kernel basis is
requested.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm
from typing import Sequence

import numpy as np

from .algebra import close, get_epsilon, is_exact, require_exact, scalar


@dataclass(frozen=True)
class Matrix:
    """Dense row-major matrix of scalars."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows * cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(scalar(c) for r in rows for c in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, idx: tuple[int, int]):
        i, j = idx
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], cols=self.rows
        )

    def matvec(self, vec: Sequence) -> list:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum((a * b for a, b in zip(self.row(i), vec)), Fraction(0)) for i in range(self.rows)]

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.entries)

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "Matrix":
        return Matrix.from_rows(
            [[self[i, j] for j in col_perm] for i in row_perm], cols=self.cols
        )


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    cols = {b.cols for b in blocks if b.rows}
    if len(cols) > 1:
        raise ValueError(f"blocks have different widths {sorted(cols)}")
    width = cols.pop() if cols else (blocks[0].cols if blocks else 0)
    return Matrix(sum(b.rows for b in blocks), width, tuple(e for b in blocks for e in b.entries))


def _integer_rows(m: Matrix) -> tuple[list[list[int]], Fraction]:
    """Scale each row to integers; also return the product of the scale factors."""
    rows = []
    scale = Fraction(1)
    for r in m.to_rows():
        d = lcm(*(c.denominator for c in r)) if r else 1
        rows.append([int(c * d) for c in r])
        scale *= d
    return rows, scale


def bareiss(rows: list[list[int]], pivot_cols: int | None = None):
    """In-place fraction-free row echelon form of an integer matrix.

    Pivots are searched only in the first ``pivot_cols`` columns (all by
    default).  Returns ``(pivots, sign)``: the pivot column of each echelon
    row, and the parity of the row swaps performed.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    limit = ncols if pivot_cols is None else pivot_cols
    prev = 1
    r = 0
    sign = 1
    pivots = []
    for c in range(limit):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            sign = -sign
        piv = rows[r][c]
        for i in range(r + 1, nrows):
            ri = rows[i]
            a = ri[c]
            row_r = rows[r]
            for j in range(c + 1, ncols):
                ri[j] = (piv * ri[j] - a * row_r[j]) // prev
            ri[c] = 0
        # rows above r keep their values; Bareiss only needs the trailing block
        prev = piv
        pivots.append(c)
        r += 1
    return pivots, sign


def rank(m: Matrix) -> int:
    """Exact rank for rational matrices, epsilon-rank for float matrices."""
    if m.rows == 0 or m.cols == 0:
        return 0
    if not m.is_exact:
        return float_rank(m)
    rows, _ = _integer_rows(m)
    pivots, _ = bareiss(rows)
    return len(pivots)


def float_rank(m: Matrix, eps: float | None = None) -> int:
    """Numerical rank by Gaussian elimination with complete pivoting."""
    eps = get_epsilon() if eps is None else eps
    a = np.array([[complex(c) for c in r] for r in m.to_rows()], dtype=np.complex128)
    if a.size == 0:
        return 0
    tol = eps * max(1.0, float(np.abs(a).max()))
    r = 0
    nrows, ncols = a.shape
    while r < min(nrows, ncols):
        sub = np.abs(a[r:, r:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= tol:
            break
        i += r
        j += r
        a[[r, i]] = a[[i, r]]
        a[:, [r, j]] = a[:, [j, r]]
        a[r + 1:] -= np.outer(a[r + 1:, r] / a[r, r], a[r])
        r += 1
    return r


def determinant(m: Matrix):
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    if m.rows == 0:
        return Fraction(1)
    require_exact(*m.entries)
    rows, scale = _integer_rows(m)
    pivots, sign = bareiss(rows)
    if len(pivots) < m.rows:
        return Fraction(0)
    return Fraction(sign * rows[-1][-1]) / scale


def kernel_basis(m: Matrix) -> list[list[Fraction]]:
    """Basis of the right kernel, one vector per free column (exact mode only)."""
    require_exact(*m.entries)
    if m.rows == 0:
        return [[Fraction(int(i == j)) for i in range(m.cols)] for j in range(m.cols)]
    rows, _ = _integer_rows(m)
    pivots, _ = bareiss(rows)
    rank_ = len(pivots)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * m.cols
        x[f] = Fraction(1)
        for r in range(rank_ - 1, -1, -1):
            pc = pivots[r]
            acc = sum((rows[r][j] * x[j] for j in range(pc + 1, m.cols)), Fraction(0))
            x[pc] = -acc / rows[r][pc]
        basis.append(x)
    return basis


def detpol_tail(rows: list[list[Fraction]]) -> list[Fraction]:
    """Minors ``det(first k-1 columns | column c)`` for every trailing column ``c``.

    ``rows`` is a ``k x l`` rational matrix with ``k <= l``.  Entry ``t`` of the
    result is the minor using column ``k - 1 + t``.  All minors vanish when the
    first ``k - 1`` columns are rank deficient.
    """
    k = len(rows)
    ncols = len(rows[0])
    m = Matrix.from_rows(rows, cols=ncols)
    irows, scale = _integer_rows(m)
    pivots, sign = bareiss(irows, pivot_cols=k - 1)
    if len(pivots) < k - 1:
        return [Fraction(0)] * (ncols - k + 1)
    return [Fraction(sign * irows[k - 1][c]) / scale for c in range(k - 1, ncols)]


def _falling(m: int, j: int) -> int:
    """``m! / (m - j)!`` for ``m >= j``, else 0."""
    return factorial(m) // factorial(m - j) if m >= j else 0


def confluent_vandermonde_kernel(roots: Sequence[tuple], l: int) -> list[list]:
    """Derivative-evaluation vectors spanning the kernel of the multiplication matrix.

    For a root ``alpha`` of multiplicity ``mult`` the vectors are
    ``(d/dx)^j (1, x, ..., x^(n+l-1))`` at ``alpha`` for ``j < mult``, where
    ``n`` is the total multiplicity.
    """
    if l < 1:
        raise ValueError("l must be at least 1")
    alphas = [scalar(a) for a, _ in roots]
    for i in range(len(alphas)):
        for k in range(i):
            if close(alphas[i], alphas[k]):
                raise ValueError(f"repeated root {alphas[i]}")
    n = sum(mult for _, mult in roots)
    length = n + l
    out = []
    for alpha, (_, mult) in zip(alphas, roots):
        if mult < 1:
            raise ValueError("multiplicities must be positive")
        one = Fraction(1) if is_exact(alpha) else 1 + 0j
        for j in range(mult):
            out.append([_falling(k, j) * alpha ** (k - j) if k >= j else 0 * one for k in range(length)])
    return out
