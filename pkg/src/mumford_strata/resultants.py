"""Multiplication matrices, Sylvester matrices, subresultants and gcd degrees.

``mult_matrix(r, l)`` has rows ``x**j * r`` (``j = 0 .. l-1``) written in the
monomial basis ``1, x, ..., x**(deg r + l - 1)``.  Stacking such blocks gives
the transposed Sylvester matrix, whose kernel dimension is the degree of the
gcd.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import Poly, require_exact
from .exactlinalg import Matrix, detpol_tail, rank, vstack


def mult_matrix(r: Poly, l: int, width: int | None = None, degree: int | None = None) -> Matrix:
    """``l x (deg r + l)`` matrix of the map ``s -> s * r`` on polynomials of degree < l.

    ``degree`` lets a polynomial be treated as having a larger formal degree
    (leading zeros); ``width`` right-pads the block with zero columns.
    """
    if l < 1:
        raise ValueError("l must be at least 1")
    k = r.degree if degree is None else degree
    if k is None:
        raise ValueError("formal degree required for the zero polynomial")
    if r.degree is not None and r.degree > k:
        raise ValueError("formal degree below actual degree")
    base = k + l
    width = base if width is None else width
    if width < base:
        raise ValueError("padding width smaller than block width")
    rows = [r.shift(j).padded(width) for j in range(l)]
    return Matrix.from_rows(rows, cols=width)


def build_mult_matrix(r: Poly, l: int) -> Matrix:
    if r.is_zero:
        raise ValueError("r must be nonzero")
    return mult_matrix(r, l)


def sylvester(p: Poly, q: Poly, m: int | None = None) -> Matrix:
    """Transposed Sylvester matrix: ``mult_matrix(p, m)`` stacked over ``mult_matrix(q, n)``.

    ``p`` must be monic of degree ``n``; ``q`` is read as a polynomial of
    formal degree ``m`` (default ``max(1, deg q)``).
    """
    if not p.is_monic():
        raise ValueError("p must be monic")
    n = p.degree
    dq = q.degree if q.degree is not None else 0
    if m is None:
        m = max(1, dq)
    if m < max(1, dq):
        raise ValueError("m must be at least max(1, deg q)")
    blocks = [mult_matrix(p, m)]
    if n > 0:
        blocks.append(mult_matrix(q, n, degree=m))
    return vstack(blocks)


def gcd_degree_pair(p: Poly, q: Poly) -> int:
    """Degree of gcd(p, q) as the kernel dimension of the Sylvester matrix."""
    s = sylvester(p, q)
    return s.cols - rank(s)


def default_shifts(degrees: Sequence[int]) -> list[int]:
    """Row counts making the stacked matrix generalise the Sylvester matrix.

    With ``m = n_1 + max(1, max_{i>1} n_i)`` every block gets ``m - n_i``
    rows and the same width ``m``; for two polynomials this is exactly the
    Sylvester matrix.
    """
    n1 = degrees[0]
    m = n1 + max([1] + list(degrees[1:]))
    return [m - n for n in degrees]


def stacked_matrix(polys: Sequence[Poly], shifts: Sequence[int] | None = None) -> Matrix:
    """Stacked multiplication blocks, each right-padded to the common width.

    ``shifts`` gives the row counts of blocks 2..k; the first block then gets
    ``m - n_1`` rows with ``m = max(n_1 + 1, n_i + m_i)``.  When omitted,
    :func:`default_shifts` is used.
    """
    if not polys:
        raise ValueError("empty polynomial list")
    if not polys[0].is_monic():
        raise ValueError("first polynomial must be monic")
    degrees = [p.degree if p.degree is not None else 0 for p in polys]
    if shifts is None:
        ms = default_shifts(degrees)
        m = degrees[0] + ms[0]
    else:
        if len(shifts) != len(polys) - 1:
            raise ValueError("need one shift per polynomial after the first")
        if any(s < 1 for s in shifts):
            raise ValueError("shifts must be at least 1")
        m = max([degrees[0] + 1] + [n + s for n, s in zip(degrees[1:], shifts)])
        ms = [m - degrees[0]] + list(shifts)
    blocks = []
    for p, n, mi in zip(polys, degrees, ms):
        if p.is_zero or mi == 0:
            continue
        blocks.append(mult_matrix(p, mi, width=m))
    return vstack(blocks) if blocks else Matrix.zeros(0, m)


def gcd_degree_multi(polys: Sequence[Poly], shifts: Sequence[int] | None = None) -> int:
    """Degree of the gcd of several polynomials as a kernel dimension."""
    s = stacked_matrix(polys, shifts)
    return s.cols - rank(s)


@dataclass(frozen=True)
class SubresultantReport:
    sequence: tuple  # (j, R_j) pairs, j ascending
    first_nonzero: int
    gcd_candidate: Poly

    def subresultant(self, j: int) -> Poly:
        return dict(self.sequence)[j]


def subresultant(p: Poly, q: Poly, j: int) -> Poly:
    """The ``j``-th polynomial subresultant of ``p`` and ``q``.

    For ``j < min(deg p, deg q)`` this is the determinant polynomial of the
    matrix with rows ``x^(m-j-1) p, ..., p, x^(n-j-1) q, ..., q``.  At
    ``j = min(deg p, deg q)`` the lower-degree input (scaled) is returned.
    """
    require_exact(p, q)
    if p.is_zero or q.is_zero:
        raise ValueError("subresultants need nonzero polynomials")
    n, m = p.degree, q.degree
    top = min(n, m)
    if j < 0 or j > top:
        raise ValueError(f"subresultant index {j} outside 0..{top}")
    if j == top:
        if m < n:
            return q * q.lc ** (n - m - 1)
        return p * p.lc ** max(m - n - 1, 0)
    width = n + m - j
    rows = []
    for k in range(m - j - 1, -1, -1):
        rows.append(list(reversed(p.shift(k).padded(width))))
    for k in range(n - j - 1, -1, -1):
        rows.append(list(reversed(q.shift(k).padded(width))))
    # columns are x^(width-1) .. x^0; minors with trailing column x^t give coeff of x^t
    minors = detpol_tail(rows)
    k = len(rows)
    coeffs = [Fraction(0)] * (j + 1)
    for t, val in enumerate(minors):
        power = width - 1 - (k - 1 + t)
        if power <= j:
            coeffs[power] += val
    return Poly(coeffs)


def subresultant_sequence(p: Poly, q: Poly) -> SubresultantReport:
    if q.is_zero:
        raise ValueError("q must be nonzero")
    if not p.is_monic():
        raise ValueError("p must be monic")
    top = min(p.degree, q.degree)
    seq = []
    first = None
    for j in range(top + 1):
        r = subresultant(p, q, j)
        seq.append((j, r))
        if first is None and not r.is_zero:
            first = j
            break
    # remaining terms are filled in for completeness
    for j in range(first + 1, top + 1):
        seq.append((j, subresultant(p, q, j)))
    return SubresultantReport(tuple(seq), first, seq[first][1].monic())


def resultant(p: Poly, q: Poly) -> Fraction:
    return subresultant(p, q, 0).coeff(0) if min(p.degree, q.degree) > 0 else _trivial_resultant(p, q)


def _trivial_resultant(p: Poly, q: Poly) -> Fraction:
    if q.degree == 0:
        return q.lc ** p.degree
    return p.lc ** q.degree


def resultant_chain_conditions(u: Poly, v: Poly, w: Poly, i: int) -> bool:
    """Whether deg gcd(u, v, w) >= i, decided by vanishing subresultants.

    First ``R_0(u, v) = ... = R_{i-1}(u, v) = 0``; then, with ``D`` the first
    nonzero subresultant of ``(u, v)``, ``R_0(w, D) = ... = R_{i-1}(w, D) = 0``.
    """
    if not (u.is_monic() and w.is_monic()):
        raise ValueError("u and w must be monic")
    if i <= 0:
        return True
    if v.is_zero:
        d = u
    else:
        rep = subresultant_sequence(u, v)
        if any(not r.is_zero for j, r in rep.sequence if j < i):
            return False
        d = rep.subresultant(rep.first_nonzero)
    if d.degree < i:
        return False
    rep = subresultant_sequence(w, d)
    return all(r.is_zero for j, r in rep.sequence if j < i)
