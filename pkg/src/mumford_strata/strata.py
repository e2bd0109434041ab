"""Fine stratification of fibers of the moment map.

A point ``A`` of the fiber ``M_g(h)`` factors as ``A = Q * A'`` with ``Q``
the monic gcd of ``u, v, w`` and ``A'`` regular.  ``Q**2`` divides ``h``, so
strata are labelled by the quadratic divisors of ``h``; the label ``(i, Q)``
has ``i = g - deg Q`` and the stratum is isomorphic to the regular part of
``M_i(h / Q**2)``.
"""
from __future__ import annotations

import cmath
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd as igcd, isqrt

from .algebra import Poly, close, is_zero, lagrange_interpolate, require_exact, scalar
from .dynamics import h_polys, sigma_of_matrix
from .exactlinalg import Matrix, rank, vstack
from .mumford import (
    ConventionError,
    MumfordMatrix,
    SpectralPoly,
    fiber_contains,
    moment_map,
    mu_P,
    quadratic_divisors,
    regular_part,
    rho_of_matrix,
)
from .resultants import mult_matrix

SEARCH_BUDGET = 10_000
SEARCH_BOUND = 40


class SearchExhausted(RuntimeError):
    """No admissible rational node was found within the search budget."""


@dataclass(frozen=True)
class StratumLabel:
    """The stratum of ``M_g(h)`` whose points have gcd exactly ``q``; ``i = g - deg q``."""

    g: int
    i: int
    q: Poly
    h: SpectralPoly

    def __post_init__(self):
        if not self.q.is_monic():
            raise ValueError("q must be monic")
        if self.q.degree != self.g - self.i:
            raise ValueError(f"deg q = {self.q.degree} but g - i = {self.g - self.i}")
        if self.h.g != self.g:
            raise ValueError("order of h does not match g")
        if not (self.q * self.q).divides(self.h.h):
            raise ValueError(f"q**2 does not divide h for q = {self.q}")

    @property
    def key(self) -> tuple:
        return (self.i, self.q.coeffs)

    @property
    def dimension(self) -> int:
        return self.i

    def __str__(self) -> str:
        return f"(i={self.i}, q={self.q})"


@dataclass(frozen=True)
class StrataLattice:
    h: SpectralPoly
    labels: tuple
    edges: tuple  # (coarser label, finer label): finer lies in the closure of coarser

    @property
    def g(self) -> int:
        return self.h.g

    def coarse_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for lab in self.labels:
            out[lab.i] = out.get(lab.i, 0) + 1
        return dict(sorted(out.items()))

    @property
    def maximal_codimension(self) -> StratumLabel:
        low = min(lab.i for lab in self.labels)
        found = [lab for lab in self.labels if lab.i == low]
        if len(found) != 1:
            raise ConventionError("deepest stratum is not unique")
        return found[0]

    def label_for(self, q: Poly) -> StratumLabel:
        for lab in self.labels:
            if lab.q == q:
                return lab
        raise KeyError(f"no stratum with q = {q}")

    def in_closure(self, finer: StratumLabel, coarser: StratumLabel) -> bool:
        """Whether the stratum ``finer`` lies in the closure of ``coarser``."""
        return coarser.q.divides(finer.q)


def classify(a: MumfordMatrix, h: SpectralPoly) -> StratumLabel:
    """Stratum label of a fiber point; the gcd degree is cross-checked against ``sigma``."""
    require_exact(a.u, a.v, a.w)
    if not fiber_contains(h, a):
        raise ValueError(f"point {a} is not on the fiber of {h.h}")
    rho, q = rho_of_matrix(a)
    sigma = sigma_of_matrix(a)
    if sigma != a.g - rho:
        raise ConventionError(f"sigma = {sigma} but g - rho = {a.g - rho}")
    return StratumLabel(a.g, sigma, q, h)


def enumerate_strata(h: SpectralPoly) -> StrataLattice:
    lattice = quadratic_divisors(h)
    g = h.g
    labels = tuple(StratumLabel(g, g - q.degree, q, h) for q in lattice.divisors)
    by_q = {lab.q: lab for lab in labels}
    edges = tuple((by_q[q], by_q[qp]) for q, qp in lattice.covers())
    return StrataLattice(h, labels, edges)


# ---------------------------------------------------------------- sampling


def rational_sqrt(c: Fraction) -> Fraction | None:
    """Square root of a non-negative rational if it is a rational square."""
    if c < 0:
        return None
    n, d = c.numerator, c.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def small_rationals(seed: int, bound: int = SEARCH_BOUND) -> list[Fraction]:
    """Distinct ``p/q`` with ``|p|, q <= bound`` in a seeded order."""
    seen = []
    for q in range(1, bound + 1):
        for p in range(-bound, bound + 1):
            if igcd(p, q) == 1:
                seen.append(Fraction(p, q))
    random.Random(seed).shuffle(seen)
    return seen


def _exact_nodes(h: Poly, q: Poly, count: int, rng: random.Random, seed: int, budget: int):
    pool = small_rationals(seed)
    pos = 0
    nodes = []
    for _ in range(count):
        tried = 0
        while True:
            if tried >= budget or pos >= len(pool):
                raise SearchExhausted(
                    f"no rational a with h(a) a nonzero square after {tried} candidates "
                    f"(budget {budget}, node {len(nodes) + 1} of {count})"
                )
            a = pool[pos]
            pos += 1
            tried += 1
            if a in (n for n, _ in nodes):
                continue
            ha = h(a)
            if ha == 0 or q(a) == 0:
                continue
            b = rational_sqrt(ha)
            if b is not None:
                nodes.append((a, b if rng.random() < 0.5 else -b))
                break
    return nodes


def _float_nodes(h: Poly, q: Poly, count: int, rng: random.Random):
    nodes = []
    while len(nodes) < count:
        a = complex(round(rng.uniform(-3, 3), 6))
        if any(close(a, n) for n, _ in nodes) or abs(h(a)) < 1e-3 or abs(q(a)) < 1e-3:
            continue
        b = cmath.sqrt(h(a))
        nodes.append((a, b if rng.random() < 0.5 else -b))
    return nodes


def _check_pairs(h: Poly, q: Poly, pairs, count: int):
    pairs = [(scalar(a), scalar(b)) for a, b in pairs]
    if len(pairs) != count:
        raise ValueError(f"need {count} (a, b) pairs, got {len(pairs)}")
    for k, (a, b) in enumerate(pairs):
        if any(close(a, c) for c, _ in pairs[:k]):
            raise ValueError(f"duplicate node {a}")
        if is_zero(q(a)) or is_zero(h(a)):
            raise ValueError(f"node {a} is a root of q*h")
        if not close(b * b, h(a)):
            raise ValueError(f"b**2 != h(a) at a = {a}")
    return pairs


def sample_stratum(
    label: StratumLabel,
    seed: int = 0,
    mode: str = "exact",
    pairs=None,
    budget: int = SEARCH_BUDGET,
) -> MumfordMatrix:
    """A point of the stratum ``label``.

    ``u = q * prod(x - a_j)``, ``v = q * v'`` with ``v'(a_j) = b_j / q(a_j)``
    interpolated through ``i`` nodes with ``b_j**2 = h(a_j) != 0``, and
    ``w = (h - v**2) / u``.  Nodes are searched among small rationals
    (exact mode), drawn at random with complex square roots (float mode), or
    taken from ``pairs``.
    """
    if mode not in ("exact", "float"):
        raise ValueError("mode must be 'exact' or 'float'")
    rng = random.Random(seed)
    q, h, i = label.q, label.h.h, label.i
    if mode == "float":
        q, h = q.to_float(), h.to_float()
    if pairs is not None:
        nodes = _check_pairs(h, q, pairs, i)
    elif mode == "exact":
        nodes = _exact_nodes(h, q, i, rng, seed, budget)
    else:
        nodes = _float_nodes(h, q, i, rng)
    one = Fraction(1) if mode == "exact" else 1 + 0j
    uprime = Poly.from_roots(a for a, _ in nodes) * one
    vprime = lagrange_interpolate([(a, b / q(a)) for a, b in nodes]) if nodes else Poly()
    u, v = q * uprime, q * vprime
    w, rem = divmod(h - v * v, u)
    if mode == "exact" and not rem.is_zero:
        raise ArithmeticError("u does not divide h - v**2")
    if mode == "float":
        if not rem.almost_equal(Poly()):
            raise ArithmeticError("u does not divide h - v**2 within tolerance")
        w = Poly(list(w.coeffs[:-1]) + [1 + 0j])
    return MumfordMatrix(label.g, u, v, w)


# ---------------------------------------------------------------- decomposition and Jacobian


def decompose_fiber_point(a: MumfordMatrix, h: SpectralPoly):
    """``(q, a', h')`` with ``a = q * a'``, ``a'`` regular and ``h' = h / q**2``."""
    require_exact(a.u, a.v, a.w)
    if not fiber_contains(h, a):
        raise ValueError("point is not on the fiber")
    q, aprime = regular_part(a)
    hprime = h / q
    if mu_P(q, aprime) != a:
        raise ConventionError("recomposition q * a' differs from a")
    if moment_map(aprime).h != hprime.h:
        raise ConventionError("a' is not on the fiber of h / q**2")
    return q, aprime, hprime


def jacobian_moment(a: MumfordMatrix) -> Matrix:
    """Jacobian of ``(h_0, ..., h_{2g})`` in the coordinates ``u, v, w``.

    Row ``u_j`` holds ``x**j w``, row ``v_j`` holds ``2 x**j v`` and row
    ``w_j`` holds ``x**j u``, as coefficient vectors of length ``2g + 1``.
    """
    g = a.g
    width = 2 * g + 1
    blocks = []
    if g:
        blocks.append(mult_matrix(a.w, g, width=width))
        blocks.append(mult_matrix(a.v * 2, g, width=width, degree=g - 1))
    blocks.append(mult_matrix(a.u, g + 1, width=width))
    return vstack(blocks)


def jacobian_from_h_polys(a: MumfordMatrix) -> Matrix:
    """The same Jacobian by differentiating the coordinate functions ``h_j``."""
    hs = h_polys(a.g)
    pt = a.point()
    names = hs[0].vars if hs else ()
    return Matrix.from_rows([[hj.diff(z).subs(pt) for hj in hs] for z in names], cols=2 * a.g + 1)


# ---------------------------------------------------------------- reports


@dataclass
class StratumCheck:
    label: StratumLabel
    ranks: list = field(default_factory=list)
    sigmas: list = field(default_factory=list)
    round_trips: int = 0
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "i": self.label.i,
            "q": [str(c) for c in self.label.q.coeffs],
            "dimension": self.label.dimension,
            "singular": self.label.i < self.label.g,
            "jacobian_ranks": self.ranks,
            "sigmas": self.sigmas,
            "round_trips": self.round_trips,
            "failures": self.failures,
        }


def smoothness_report(h: SpectralPoly, samples_per_stratum: int = 2, seed: int = 0) -> dict:
    """Sample every stratum and check the Jacobian rank and field-span laws.

    For each sample: ``rank J = 2g + 1 - rho``, ``sigma = i`` and
    ``classify`` returns the sampled label.  Strata with ``i < g`` form the
    singular locus of the fiber.
    """
    lattice = enumerate_strata(h)
    g = h.g
    checks = []
    for n, lab in enumerate(lattice.labels):
        chk = StratumCheck(lab)
        for k in range(samples_per_stratum):
            try:
                a = sample_stratum(lab, seed=seed + 1000 * n + k)
                r = rank(jacobian_moment(a))
                rho, _ = rho_of_matrix(a)
                s = sigma_of_matrix(a)
                chk.ranks.append(r)
                chk.sigmas.append(s)
                if r != 2 * g + 1 - rho:
                    chk.failures.append(f"rank {r} != 2g+1-rho = {2 * g + 1 - rho}")
                if s != lab.i:
                    chk.failures.append(f"sigma {s} != i = {lab.i}")
                if classify(a, h) == lab:
                    chk.round_trips += 1
                else:
                    chk.failures.append(f"classify({a}) != {lab}")
            except (ArithmeticError, ValueError, RuntimeError) as exc:
                chk.failures.append(f"{type(exc).__name__}: {exc}")
        checks.append(chk)
    ok = all(not c.failures for c in checks)
    return {
        "g": g,
        "strata": [c.to_dict() for c in checks],
        "coarse_counts": {str(k): v for k, v in lattice.coarse_counts().items()},
        "singular_strata": [c.to_dict()["q"] for c in checks if c.label.i < g],
        "ok": ok,
    }


def degeneration_indices(start: MumfordMatrix, end: MumfordMatrix, steps: int = 10) -> list:
    """``(t, sigma)`` along the straight path ``(1 - t) start + t end`` at ``t = k / steps``.

    The sets ``{sigma <= k}`` are closed, so ``sigma`` at the endpoint never
    exceeds its value just before it.
    """
    if start.g != end.g:
        raise ValueError("order mismatch")
    require_exact(start.u, start.v, start.w, end.u, end.v, end.w)
    cs, ce = start.coordinates(), end.coordinates()
    out = []
    for k in range(steps + 1):
        t = Fraction(k, steps)
        pt = MumfordMatrix.from_coordinates(start.g, [(1 - t) * x + t * y for x, y in zip(cs, ce)])
        out.append((t, sigma_of_matrix(pt)))
    return out
