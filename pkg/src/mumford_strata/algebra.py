"""Scalars, dense univariate polynomials and sparse multivariate polynomials.

Two coefficient fields are supported: exact rationals (``fractions.Fraction``)
and machine complex numbers (``complex``).  The field of a polynomial is read
off its coefficients; exact is the default and the only field accepted by the
gcd-based routines.
"""
from __future__ import annotations

import numbers
from contextlib import contextmanager
from contextvars import ContextVar
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

Scalar = Union[Fraction, complex]

DEFAULT_EPSILON = 1e-9
_epsilon: ContextVar[float] = ContextVar("epsilon", default=DEFAULT_EPSILON)


class ExactModeRequired(ValueError):
    """Raised when a float-mode value reaches an exact-only algorithm."""


def get_epsilon() -> float:
    return _epsilon.get()


@contextmanager
def epsilon(value: float) -> Iterator[float]:
    """Temporarily change the float zero-test tolerance."""
    if not value > 0:
        raise ValueError("epsilon must be positive")
    token = _epsilon.set(value)
    try:
        yield value
    finally:
        _epsilon.reset(token)


def scalar(c) -> Scalar:
    """Coerce ``c`` into the scalar field.

    Integers, rationals and ``"num/den"`` strings become exact rationals;
    floats and complex numbers become ``complex``.
    """
    if isinstance(c, Fraction):
        return c
    if isinstance(c, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c.strip())
    if isinstance(c, numbers.Rational):
        return Fraction(c.numerator, c.denominator)
    if isinstance(c, numbers.Complex):
        return complex(c)
    raise TypeError(f"cannot use {type(c).__name__} as a scalar")


def is_exact(c) -> bool:
    return isinstance(c, (Fraction, int))


def is_zero(c) -> bool:
    if isinstance(c, (Fraction, int)):
        return c == 0
    return abs(c) <= _epsilon.get()


def close(a, b) -> bool:
    """Hybrid comparison: absolute below magnitude 1, relative above."""
    if is_exact(a) and is_exact(b):
        return a == b
    scale = max(1.0, abs(a), abs(b))
    return abs(a - b) <= _epsilon.get() * scale


def require_exact(*values) -> None:
    for v in values:
        if isinstance(v, Poly):
            if not v.is_exact:
                raise ExactModeRequired("exact rational coefficients required")
        elif not is_exact(v):
            raise ExactModeRequired("exact rational scalar required")


class Poly:
    """Dense univariate polynomial, coefficients in ascending degree.

    Trailing zeros are stripped, so the zero polynomial has no coefficients
    and ``degree`` is ``None`` for it.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [scalar(c) for c in coeffs]
        while cs and is_zero(cs[-1]):
            cs.pop()
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        p = cls.const(1)
        for r in roots:
            p = p * cls((-scalar(r), 1))
        return p

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Scalar:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and close(self.coeffs[-1], Fraction(1))

    def coeff(self, k: int) -> Scalar:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def padded(self, n: int) -> list:
        """Coefficient list of length ``n`` (zero padded)."""
        if len(self.coeffs) > n:
            raise ValueError(f"degree {self.degree} does not fit in {n} slots")
        return list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and c == 1:
                parts.append(mono)
            elif mono and c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(parts).replace("+ -", "- ")

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, float, complex)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def almost_equal(self, other: "Poly") -> bool:
        n = max(len(self.coeffs), len(other.coeffs))
        return all(close(self.coeff(k), other.coeff(k)) for k in range(n))

    def _coerce(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly.const(other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            try:
                c = scalar(other)
            except TypeError:
                return NotImplemented
            return Poly(a * c for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other) -> tuple["Poly", "Poly"]:
        other = self._coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lc
        if len(rem) - 1 < dq:
            return Poly(), Poly(rem)
        quot = [Fraction(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] / lc
            quot[k] = c
            if c == 0:
                continue
            for j, b in enumerate(other.coeffs):
                rem[k + j] -= c * b
        return Poly(quot), Poly(rem[:dq])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        """Division that must leave no remainder."""
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: "Poly") -> bool:
        if self.is_zero:
            return other.is_zero
        return (other % self).is_zero

    def __call__(self, x):
        acc = Fraction(0) if is_exact(x) else 0j
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(k * self.coeffs[k] for k in range(1, len(self.coeffs)))

    def monic(self) -> "Poly":
        return self * (1 / self.lc)

    def truncate_div(self, j: int) -> "Poly":
        return truncate_div(self, j)

    def shift(self, k: int) -> "Poly":
        """Multiply by ``x**k``."""
        if not self.coeffs:
            return self
        return Poly([0] * k + list(self.coeffs))

    def to_float(self) -> "Poly":
        return Poly(complex(c) for c in self.coeffs)


X = Poly.x()
ONE = Poly.const(1)
ZERO = Poly()


def truncate_div(p: Poly, j: int) -> Poly:
    """Polynomial part of ``p(x) / x**j``."""
    if j < 0:
        raise ValueError("j must be non-negative")
    return Poly(p.coeffs[j:])


def gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm (exact mode only)."""
    require_exact(p, q)
    a, b = p, q
    while not b.is_zero:
        a, b = b, a % b
    return a.monic() if not a.is_zero else a


def gcd_many(polys: Iterable[Poly]) -> Poly:
    g = ZERO
    for p in polys:
        g = gcd(g, p)
    return g


def lagrange_interpolate(points: Sequence[tuple]) -> Poly:
    """Interpolating polynomial of degree < len(points) through ``points``."""
    nodes = [scalar(a) for a, _ in points]
    values = [scalar(b) for _, b in points]
    for i in range(len(nodes)):
        for k in range(i):
            if close(nodes[i], nodes[k]):
                raise ValueError(f"duplicate interpolation node {nodes[i]}")
    out = Poly()
    for j, (aj, bj) in enumerate(zip(nodes, values)):
        basis = ONE
        denom = Fraction(1)
        for k, ak in enumerate(nodes):
            if k != j:
                basis = basis * Poly((-ak, 1))
                denom *= aj - ak
        out = out + basis * (bj / denom)
    return out


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic squarefree, pairwise coprime factors with multiplicities."""
    require_exact(p)
    if p.is_zero:
        raise ValueError("zero polynomial has no squarefree decomposition")
    f = p.monic()
    if f.degree == 0:
        return []
    out = []
    dp = f.derivative()
    a = gcd(f, dp)
    b = f.exact_div(a)
    c = dp.exact_div(a)
    d = c - b.derivative()
    k = 1
    while b.degree > 0:
        a = gcd(b, d)
        if a.degree > 0:
            out.append((a, k))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        k += 1
    return out


class BiPoly:
    """Sparse polynomial in two formal parameters ``x`` and ``y``.

    Coefficients may be scalars or any ring element supporting ``+`` and
    ``*`` (e.g. :class:`MPoly`), which is how bracket generating functions are
    represented.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        self.terms: dict = {}
        for key, c in (terms or {}).items():
            if not _ring_zero(c):
                self.terms[key] = c

    def __repr__(self) -> str:
        return f"BiPoly({self.terms!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.terms == other.terms

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return BiPoly(out)

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other) -> "BiPoly":
        if not isinstance(other, BiPoly):
            return BiPoly({k: c * other for k, c in self.terms.items()})
        out: dict = {}
        for (i, j), a in self.terms.items():
            for (k, l), b in other.terms.items():
                key = (i + k, j + l)
                out[key] = out[key] + a * b if key in out else a * b
        return BiPoly(out)

    __rmul__ = __mul__

    def __call__(self, x, y):
        return sum((c * x**i * y**j for (i, j), c in self.terms.items()), Fraction(0))

    def coeff_y(self, j: int) -> Poly:
        """Coefficient of ``y**j`` as a polynomial in ``x`` (scalar coefficients)."""
        deg = max((i for (i, jj) in self.terms if jj == j), default=-1)
        return Poly(self.terms.get((i, j), 0) for i in range(deg + 1))

    def diagonal(self) -> Poly:
        """Restriction to ``y = x``."""
        deg = max((i + j for (i, j) in self.terms), default=-1)
        out = [Fraction(0)] * (deg + 1)
        for (i, j), c in self.terms.items():
            out[i + j] += c
        return Poly(out)

    @classmethod
    def from_x(cls, p: Poly) -> "BiPoly":
        return cls({(k, 0): c for k, c in enumerate(p.coeffs)})

    @classmethod
    def from_y(cls, p: Poly) -> "BiPoly":
        return cls({(0, k): c for k, c in enumerate(p.coeffs)})


def _ring_zero(c) -> bool:
    if isinstance(c, MPoly):
        return c.is_zero
    return is_zero(c)


def divided_difference_terms(coeffs: Sequence) -> dict[tuple[int, int], object]:
    """Terms of ``(p(x) - p(y)) / (x - y)`` for any coefficient ring."""
    out: dict = {}
    for k, c in enumerate(coeffs):
        for a in range(k):
            key = (a, k - 1 - a)
            out[key] = out[key] + c if key in out else c
    return out


def divided_difference(p: Poly) -> BiPoly:
    """``(p(x) - p(y)) / (x - y)`` as an exact bipolynomial."""
    return BiPoly(divided_difference_terms(p.coeffs))


def formal_residue(f, i: int):
    """Coefficient of ``y**i``.

    ``f`` is a :class:`BiPoly` (result is a polynomial in ``x``) or a sequence
    indexed by powers of ``y`` (entries beyond its length are zero and
    returned as ``None``).
    """
    if i < 0:
        raise ValueError("i must be non-negative")
    if isinstance(f, BiPoly):
        return f.coeff_y(i)
    return f[i] if i < len(f) else None


class MPoly:
    """Sparse multivariate polynomial over a fixed, ordered variable table."""

    __slots__ = ("vars", "terms", "_index")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.vars: tuple = tuple(variables)
        self.terms: dict = {}
        n = len(self.vars)
        for exps, c in (terms or {}).items():
            if len(exps) != n:
                raise ValueError("exponent vector does not match variable table")
            c = scalar(c)
            if not is_zero(c):
                self.terms[tuple(exps)] = c
        self._index = None

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "MPoly":
        variables = tuple(variables)
        exps = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise KeyError(name)
        return cls(variables, {exps: 1})

    @classmethod
    def const(cls, variables: Sequence[str], c) -> "MPoly":
        return cls(variables, {(0,) * len(tuple(variables)): c})

    def index(self, name: str) -> int:
        if self._index is None:
            self._index = {v: i for i, v in enumerate(self.vars)}
        return self._index[name]

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __repr__(self) -> str:
        return f"MPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, reverse=True):
            c = self.terms[exps]
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, exps) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def _check(self, other: "MPoly") -> None:
        if self.vars != other.vars:
            raise ValueError("variable tables differ")

    def _lift(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            self._check(other)
            return other
        return MPoly.const(self.vars, other)

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction, complex, float)):
            return self == MPoly.const(self.vars, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self.terms.items())))

    def __add__(self, other) -> "MPoly":
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "MPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            c = scalar(other)
            return MPoly(self.vars, {e: a * c for e, a in self.terms.items()})
        self._check(other)
        out: dict = {}
        for e1, a in self.terms.items():
            for e2, b in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + a * b
        return MPoly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MPoly":
        out = MPoly.const(self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    def diff(self, name: str) -> "MPoly":
        """Partial derivative with respect to the variable ``name``."""
        i = self.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return MPoly(self.vars, out)

    def subs(self, point: Mapping[str, object]):
        """Evaluate at a full numeric point; returns a scalar."""
        missing = [v for v in self.vars if v not in point]
        if missing and self.terms:
            used = {v for e in self.terms for v, k in zip(self.vars, e) if k}
            if used & set(missing):
                raise KeyError(f"no value for {sorted(used & set(missing))}")
        values = [scalar(point[v]) if v in point else Fraction(0) for v in self.vars]
        acc = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for val, k in zip(values, e):
                if k:
                    term = term * val**k
            acc = acc + term
        return acc

    def compose(self, images: Mapping[str, "MPoly"], target_vars: Sequence[str]) -> "MPoly":
        """Substitute each variable by a polynomial over ``target_vars``."""
        target_vars = tuple(target_vars)
        out = MPoly(target_vars)
        cache = {}
        for e, c in self.terms.items():
            term = MPoly.const(target_vars, c)
            for v, k in zip(self.vars, e):
                if k:
                    key = (v, k)
                    if key not in cache:
                        img = images[v]
                        if not isinstance(img, MPoly):
                            img = MPoly.const(target_vars, img)
                        cache[key] = img**k
                    term = term * cache[key]
            out = out + term
        return out

    def reindex(self, target_vars: Sequence[str]) -> "MPoly":
        """Same polynomial over a larger (or reordered) variable table."""
        target_vars = tuple(target_vars)
        pos = [target_vars.index(v) for v in self.vars]
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * len(target_vars)
            for p, k in zip(pos, e):
                e2[p] = k
            out[tuple(e2)] = c
        return MPoly(target_vars, out)

    def constant_value(self):
        """The scalar value of a constant polynomial."""
        if any(any(e) for e in self.terms):
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * len(self.vars), Fraction(0))
