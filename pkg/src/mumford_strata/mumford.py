"""Points of the Mumford phase space, the moment map and quadratic divisors."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import Sequence

from .algebra import ONE, X, Poly, gcd, gcd_many, require_exact, scalar, squarefree_decomposition
from .resultants import gcd_degree_multi, resultant_chain_conditions


class ConventionError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


def coordinate_names(g: int) -> list[str]:
    """Ordered coordinates ``u_0..u_{g-1}, v_0..v_{g-1}, w_0..w_g``."""
    return (
        [f"u{i}" for i in range(g)]
        + [f"v{i}" for i in range(g)]
        + [f"w{i}" for i in range(g + 1)]
    )


@dataclass(frozen=True)
class MumfordMatrix:
    """The trace-free matrix ``[[v, u], [w, -v]]`` of order ``g``."""

    g: int
    u: Poly
    v: Poly
    w: Poly

    def __post_init__(self):
        g = self.g
        if g < 0:
            raise ValueError("order must be non-negative")
        if self.u.degree != g or not self.u.is_monic():
            raise ValueError(f"u must be monic of degree {g}, got {self.u}")
        if not self.v.is_zero and self.v.degree > g - 1:
            raise ValueError(f"v must have degree <= {g - 1}, got {self.v}")
        if self.w.degree != g + 1 or not self.w.is_monic():
            raise ValueError(f"w must be monic of degree {g + 1}, got {self.w}")

    @property
    def is_exact(self) -> bool:
        return self.u.is_exact and self.v.is_exact and self.w.is_exact

    def coordinates(self) -> list:
        g = self.g
        return (
            [self.u.coeff(i) for i in range(g)]
            + [self.v.coeff(i) for i in range(g)]
            + [self.w.coeff(i) for i in range(g + 1)]
        )

    def point(self) -> dict:
        """Coordinates keyed by name, for evaluating polynomial functions."""
        return dict(zip(coordinate_names(self.g), self.coordinates()))

    @classmethod
    def from_coordinates(cls, g: int, coords: Sequence) -> "MumfordMatrix":
        coords = [scalar(c) for c in coords]
        if len(coords) != 3 * g + 1:
            raise ValueError(f"order {g} needs {3 * g + 1} coordinates")
        one = Fraction(1) if all(isinstance(c, Fraction) for c in coords) else 1 + 0j
        u = Poly(coords[:g] + [one])
        v = Poly(coords[g:2 * g])
        w = Poly(coords[2 * g:] + [one])
        return cls(g, u, v, w)

    def __mul__(self, p: Poly) -> "MumfordMatrix":
        return mu_P(p, self)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"M_{self.g}(u={self.u}, v={self.v}, w={self.w})"


def m0_point(w0=0) -> MumfordMatrix:
    """The order-0 point ``(1, 0, x + w0)``."""
    return MumfordMatrix(0, ONE, Poly(), X + scalar(w0))


@dataclass(frozen=True)
class SpectralPoly:
    """Monic spectral polynomial of odd degree ``2g + 1``, optionally factored."""

    h: Poly
    factors: tuple | None = None

    def __post_init__(self):
        h = self.h
        if h.is_zero or not h.is_monic() or h.degree % 2 != 1:
            raise ValueError(f"spectral polynomial must be monic of odd degree, got {h}")
        if self.factors is not None:
            object.__setattr__(self, "factors", tuple((f, int(k)) for f, k in self.factors))
            _check_factorization(h, self.factors)

    @property
    def g(self) -> int:
        return (self.h.degree - 1) // 2

    def with_factors(self) -> "SpectralPoly":
        if self.factors is not None:
            return self
        return SpectralPoly(self.h, tuple(factor_rational(self.h)))

    def __truediv__(self, q: Poly) -> "SpectralPoly":
        """``h / q**2`` with the factorization carried along."""
        hp = self.h.exact_div(q * q)
        if self.factors is None:
            return SpectralPoly(hp)
        left = []
        rest = q
        for f, k in self.factors:
            e = 0
            while e < k and f.divides(rest):
                rest = rest.exact_div(f)
                e += 1
            if k - 2 * e < 0:
                raise ArithmeticError("q**2 does not divide h")
            if k - 2 * e:
                left.append((f, k - 2 * e))
        if rest.degree != 0:
            raise ArithmeticError("q is not a product of the given factors")
        return SpectralPoly(hp, tuple(left))


def _check_factorization(h: Poly, factors) -> None:
    prod = ONE
    for f, k in factors:
        if k < 1:
            raise ValueError("multiplicities must be positive")
        if f.degree is None or f.degree < 1 or not f.is_monic():
            raise ValueError(f"factor {f} must be monic and non-constant")
        prod = prod * f**k
    if prod != h:
        raise ValueError("factorization does not reconstruct h")
    if h.is_exact:
        fs = [f for f, _ in factors]
        for a, b in itertools.combinations(fs, 2):
            if gcd(a, b).degree > 0:
                raise ValueError(f"factors {a} and {b} are not coprime")
        for f in fs:
            if gcd(f, f.derivative()).degree > 0:
                raise ValueError(f"factor {f} is not squarefree")


def moment_map(a: MumfordMatrix) -> SpectralPoly:
    """``v**2 + u*w``."""
    return SpectralPoly(a.v * a.v + a.u * a.w)


def fiber_contains(h: SpectralPoly, a: MumfordMatrix) -> bool:
    if h.g != a.g:
        raise ValueError(f"order mismatch: fiber of order {h.g}, point of order {a.g}")
    hh = moment_map(a).h
    if h.h.is_exact and a.is_exact:
        return hh == h.h
    return hh.almost_equal(h.h)


def rho_of_matrix(a: MumfordMatrix) -> tuple[int, Poly]:
    """Degree of non-regularity and the monic gcd of ``u, v, w``.

    The Euclidean gcd is checked against the kernel dimension of the stacked
    multiplication matrix and against the vanishing-subresultant threshold.
    """
    require_exact(a.u, a.v, a.w)
    d = gcd_many([a.u, a.v, a.w])
    rho = d.degree
    via_kernel = gcd_degree_multi([a.u, a.v, a.w])
    if via_kernel != rho:
        raise ConventionError(f"Euclid gives rho={rho}, kernel dimension gives {via_kernel}")
    if not resultant_chain_conditions(a.u, a.v, a.w, rho) or resultant_chain_conditions(
        a.u, a.v, a.w, rho + 1
    ):
        raise ConventionError(f"subresultant chain disagrees with rho={rho}")
    return rho, d


def regular_part(a: MumfordMatrix) -> tuple[Poly, MumfordMatrix]:
    """Factor ``a = p * a'`` with ``p`` the monic gcd and ``a'`` regular."""
    require_exact(a.u, a.v, a.w)
    p = gcd_many([a.u, a.v, a.w])
    k = p.degree
    return p, MumfordMatrix(a.g - k, a.u.exact_div(p), a.v.exact_div(p), a.w.exact_div(p))


def mu_P(p: Poly, a: MumfordMatrix) -> MumfordMatrix:
    """The embedding ``A -> p * A`` of order ``g`` into order ``g + deg p``."""
    if not p.is_monic():
        raise ValueError("p must be monic")
    return MumfordMatrix(a.g + p.degree, p * a.u, p * a.v, p * a.w)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def rational_roots(p: Poly) -> list[Fraction]:
    """Distinct rational roots of an exact polynomial."""
    require_exact(p)
    if p.is_zero:
        raise ValueError("zero polynomial")
    roots = []
    coeffs = list(p.coeffs)
    if coeffs[0] == 0:
        roots.append(Fraction(0))
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
    if len(coeffs) <= 1:
        return roots
    d = lcm(*(c.denominator for c in coeffs))
    ints = [int(c * d) for c in coeffs]
    q = Poly(ints)
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in roots and q(cand) == 0:
                    roots.append(cand)
    return roots


def factor_rational(h: Poly) -> list[tuple[Poly, int]]:
    """Rational linear factors with multiplicity, plus squarefree blocks of the rest.

    The non-linear remainder is split by squarefree decomposition only; each
    block is treated as irreducible.
    """
    require_exact(h)
    rest = h.monic()
    out = []
    for r in rational_roots(h):
        f = Poly((-r, 1))
        k = 0
        while f.divides(rest):
            rest = rest.exact_div(f)
            k += 1
        out.append((f, k))
    if rest.degree > 0:
        out.extend(squarefree_decomposition(rest))
    out.sort(key=lambda fk: (fk[0].degree, fk[0].coeffs))
    return out


@dataclass(frozen=True)
class DivisorLattice:
    """Monic ``Q`` with ``Q**2 | h``, ordered by divisibility."""

    divisors: tuple
    rho_h: int

    @property
    def maximal(self) -> Poly:
        top = [q for q in self.divisors if q.degree == self.rho_h]
        if len(top) != 1:
            raise ConventionError("maximal quadratic divisor is not unique")
        return top[0]

    def of_degree(self, d: int) -> list[Poly]:
        return [q for q in self.divisors if q.degree == d]

    def covers(self) -> list[tuple[Poly, Poly]]:
        """Covering pairs ``(q, q')``: ``q | q'`` with nothing strictly between."""
        out = []
        for q in self.divisors:
            for qp in self.divisors:
                if qp.degree <= q.degree or not q.divides(qp):
                    continue
                between = any(
                    r.degree > q.degree and r.degree < qp.degree and q.divides(r) and r.divides(qp)
                    for r in self.divisors
                )
                if not between:
                    out.append((q, qp))
        return out


def quadratic_divisors(h: SpectralPoly) -> DivisorLattice:
    if h.factors is None:
        if not h.h.is_exact:
            raise ValueError("a factorization is required")
        h = h.with_factors()
    choices = [[f**e for e in range(k // 2 + 1)] for f, k in h.factors]
    divisors = set()
    for combo in itertools.product(*choices):
        q = ONE
        for part in combo:
            q = q * part
        divisors.add(q)
    ordered = tuple(sorted(divisors, key=lambda q: (q.degree, q.coeffs)))
    rho_h = sum((k // 2) * f.degree for f, k in h.factors)
    return DivisorLattice(ordered, rho_h)


def random_monic(rng: random.Random, degree: int, spread: int = 3) -> Poly:
    return Poly([Fraction(rng.randint(-spread, spread), rng.randint(1, 2)) for _ in range(degree)] + [1])


def random_regular(g: int, rng: random.Random, spread: int = 3) -> MumfordMatrix:
    """A regular exact point of order ``g`` with small rational coordinates."""
    while True:
        coords = [Fraction(rng.randint(-spread, spread), rng.randint(1, 2)) for _ in range(3 * g + 1)]
        a = MumfordMatrix.from_coordinates(g, coords)
        if gcd_many([a.u, a.v, a.w]).degree == 0:
            return a


def random_matrix(g: int, rng: random.Random, rho: int | None = None, spread: int = 3) -> MumfordMatrix:
    """Exact point of order ``g`` whose gcd has degree ``rho`` (random if None).

    The gcd is a product of linear factors with small integer roots, so
    repeated roots occur.
    """
    if rho is None:
        rho = rng.randint(0, g)
    if not 0 <= rho <= g:
        raise ValueError("rho must lie in 0..g")
    q = Poly.from_roots(rng.randint(-2, 2) for _ in range(rho))
    return mu_P(q, random_regular(g - rho, rng, spread))
