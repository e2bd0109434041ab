"""Lax vector fields, the two Poisson brackets and Hamiltonian fields.

The Lax fields come from commutators ``[A(x), B]`` with

* ``B = (A(x) - A(y)) / (x - y) - [[0, 0], [u(y), 0]]`` for ``D_y``,
* ``B = [A(x) / x**(i+1)]_+ - [[0, 0], [u_i, 0]]`` for ``D_i``,

so only polynomial arithmetic is involved.  With ``A = [[v, u], [w, -v]]``
and ``B = [[p, q], [r, -p]]`` the commutator gives

    du = 2 (v q - u p),   dv = u r - q w,   dw = 2 (w p - v r).

Brackets are stored as coordinate tables ``(a, b) -> MPoly`` using the
conventions ``u_g = 1``, ``w_{g+1} = 1`` and zero beyond the top degrees.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import MPoly, Poly, divided_difference_terms, require_exact, scalar, truncate_div
from .exactlinalg import Matrix, rank
from .mumford import MumfordMatrix, coordinate_names, mu_P, random_matrix


# ---------------------------------------------------------------- tangent vectors


@dataclass(frozen=True)
class TangentValue:
    """Tangent vector ``(du, dv, dw)`` at a point of ``M_g``."""

    g: int
    du: Poly
    dv: Poly
    dw: Poly

    def __post_init__(self):
        g = self.g
        for name, p, bound in (("du", self.du, g - 1), ("dv", self.dv, g - 1), ("dw", self.dw, g)):
            if not p.is_zero and p.degree > bound:
                raise ValueError(f"{name} has degree {p.degree} > {bound}")

    @classmethod
    def zero(cls, g: int) -> "TangentValue":
        return cls(g, Poly(), Poly(), Poly())

    @property
    def is_zero(self) -> bool:
        return self.du.is_zero and self.dv.is_zero and self.dw.is_zero

    def flatten(self) -> list:
        """Components in coordinate order ``u_0.., v_0.., w_0..w_g``."""
        g = self.g
        return (
            [self.du.coeff(k) for k in range(g)]
            + [self.dv.coeff(k) for k in range(g)]
            + [self.dw.coeff(k) for k in range(g + 1)]
        )

    def __add__(self, other: "TangentValue") -> "TangentValue":
        if other.g != self.g:
            raise ValueError("order mismatch")
        return TangentValue(self.g, self.du + other.du, self.dv + other.dv, self.dw + other.dw)

    def __sub__(self, other: "TangentValue") -> "TangentValue":
        return self + other * -1

    def __mul__(self, c) -> "TangentValue":
        c = Poly.const(c)
        return TangentValue(self.g, self.du * c, self.dv * c, self.dw * c)

    __rmul__ = __mul__

    def pushforward(self, p: Poly) -> "TangentValue":
        """Image under the differential of ``A -> p * A``."""
        return TangentValue(self.g + p.degree, p * self.du, p * self.dv, p * self.dw)

    def almost_equal(self, other: "TangentValue") -> bool:
        return (
            self.g == other.g
            and self.du.almost_equal(other.du)
            and self.dv.almost_equal(other.dv)
            and self.dw.almost_equal(other.dw)
        )


def _commutator(u, v, w, p, q, r):
    """Entries ``(du, dv, dw)`` of ``[[[v, u], [w, -v]], [[p, q], [r, -p]]]``."""
    return 2 * (v * q - u * p), u * r - q * w, 2 * (w * p - v * r)


def _divided_poly(p: Poly, y) -> Poly:
    """``(p(x) - p(y)) / (x - y)`` as a polynomial in ``x``."""
    if p.is_zero:
        return p
    quot, _ = divmod(p, Poly((-y, 1)))
    return quot


def lax_field_at(a: MumfordMatrix, y) -> TangentValue:
    """``D_y`` at ``a``, through the exact divided difference of ``A``."""
    y = scalar(y)
    p = _divided_poly(a.v, y)
    q = _divided_poly(a.u, y)
    r = _divided_poly(a.w, y) - Poly.const(a.u(y))
    du, dv, dw = _commutator(a.u, a.v, a.w, p, q, r)
    return TangentValue(a.g, du, dv, dw)


def lax_field_i(a: MumfordMatrix, i: int) -> TangentValue:
    """``D_i`` at ``a``; vanishes identically for ``i >= g``."""
    if i < 0:
        raise ValueError("i must be non-negative")
    p = truncate_div(a.v, i + 1)
    q = truncate_div(a.u, i + 1)
    r = truncate_div(a.w, i + 1) - Poly.const(a.u.coeff(i))
    du, dv, dw = _commutator(a.u, a.v, a.w, p, q, r)
    return TangentValue(a.g, du, dv, dw)


def lax_field_series(a: MumfordMatrix, y) -> TangentValue:
    """``sum_{i<g} y**i D_i`` at ``a``."""
    out = TangentValue.zero(a.g)
    for i in range(a.g):
        out = out + lax_field_i(a, i) * (scalar(y) ** i)
    return out


def sigma_of_matrix(a: MumfordMatrix) -> int:
    """Dimension of the span of ``D_0, ..., D_{g-1}`` at ``a``."""
    if a.g == 0:
        return 0
    m = Matrix.from_rows([lax_field_i(a, i).flatten() for i in range(a.g)])
    return rank(m)


# ---------------------------------------------------------------- symbolic fields


class _SymPoly:
    """Univariate polynomial with MPoly coefficients (ascending, untrimmed)."""

    __slots__ = ("c", "vars")

    def __init__(self, coeffs: Sequence[MPoly], variables):
        self.c = list(coeffs)
        self.vars = variables

    def _zero(self) -> MPoly:
        return MPoly(self.vars)

    def _get(self, k):
        return self.c[k] if k < len(self.c) else self._zero()

    def __add__(self, other: "_SymPoly") -> "_SymPoly":
        n = max(len(self.c), len(other.c))
        return _SymPoly([self._get(k) + other._get(k) for k in range(n)], self.vars)

    def __neg__(self) -> "_SymPoly":
        return _SymPoly([-c for c in self.c], self.vars)

    def __sub__(self, other: "_SymPoly") -> "_SymPoly":
        return self + (-other)

    def __mul__(self, other) -> "_SymPoly":
        if not isinstance(other, _SymPoly):
            return _SymPoly([c * other for c in self.c], self.vars)
        out = [self._zero() for _ in range(max(len(self.c) + len(other.c) - 1, 0))]
        for i, a in enumerate(self.c):
            if a.is_zero:
                continue
            for j, b in enumerate(other.c):
                if not b.is_zero:
                    out[i + j] = out[i + j] + a * b
        return _SymPoly(out, self.vars)

    __rmul__ = __mul__

    def truncate(self, j: int) -> "_SymPoly":
        return _SymPoly(self.c[j:], self.vars)

    def coeffs(self, n: int) -> list[MPoly]:
        return [self._get(k) for k in range(n)]


def _symbolic_point(g: int):
    names = coordinate_names(g)
    var = lambda n: MPoly.var(names, n)
    one = MPoly.const(names, 1)
    u = _SymPoly([var(f"u{k}") for k in range(g)] + [one], names)
    v = _SymPoly([var(f"v{k}") for k in range(g)], names)
    w = _SymPoly([var(f"w{k}") for k in range(g + 1)] + [one], names)
    return names, u, v, w


@dataclass(frozen=True)
class SymbolicField:
    """Polynomial vector field on ``M_g``: coordinate name -> MPoly."""

    g: int
    components: Mapping[str, MPoly]

    def __post_init__(self):
        if set(self.components) != set(coordinate_names(self.g)):
            raise ValueError(f"a field on M_{self.g} needs {3 * self.g + 1} components")

    def __getitem__(self, name: str) -> MPoly:
        return self.components[name]

    def evaluate(self, a: MumfordMatrix) -> TangentValue:
        if a.g != self.g:
            raise ValueError("order mismatch")
        pt = a.point()
        g = self.g
        val = lambda n: self.components[n].subs(pt)
        return TangentValue(
            g,
            Poly(val(f"u{k}") for k in range(g)),
            Poly(val(f"v{k}") for k in range(g)),
            Poly(val(f"w{k}") for k in range(g + 1)),
        )

    def lie_derivative(self, f: MPoly) -> MPoly:
        """``sum_k (field)_k * df/dz_k``."""
        out = MPoly(f.vars)
        for name, comp in self.components.items():
            d = f.diff(name)
            if not d.is_zero and not comp.is_zero:
                out = out + comp * d
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolicField):
            return NotImplemented
        return self.g == other.g and dict(self.components) == dict(other.components)


def symbolic_field(g: int, i: int) -> SymbolicField:
    """``D_i`` on ``M_g`` with symbolic coordinates."""
    if not 0 <= i < g:
        raise ValueError(f"need 0 <= i < g, got i={i}, g={g}")
    names, u, v, w = _symbolic_point(g)
    p, q = v.truncate(i + 1), u.truncate(i + 1)
    r = w.truncate(i + 1) - _SymPoly([u._get(i)], names)
    du, dv, dw = _commutator(u, v, w, p, q, r)
    comps = {}
    for prefix, poly, n in (("u", du, g), ("v", dv, g), ("w", dw, g + 1)):
        for k, c in enumerate(poly.coeffs(n)):
            comps[f"{prefix}{k}"] = c
        # top coefficients must cancel for the field to be tangent to M_g
        if any(not c.is_zero for c in poly.c[n:]):
            raise ArithmeticError(f"component d{prefix} exceeds its degree bound")
    return SymbolicField(g, comps)


def h_polys(g: int) -> list[MPoly]:
    """Coefficients ``h_0 .. h_{2g}`` of ``v**2 + u*w`` as coordinate functions."""
    names, u, v, w = _symbolic_point(g)
    h = v * v + u * w
    return h.coeffs(2 * g + 1)


# ---------------------------------------------------------------- Poisson brackets


def _extended_coordinates(g: int):
    names = coordinate_names(g)
    var = lambda n: MPoly.var(names, n)
    zero = MPoly(names)
    one = MPoly.const(names, 1)

    def U(k):
        return var(f"u{k}") if 0 <= k < g else (one if k == g else zero)

    def V(k):
        return var(f"v{k}") if 0 <= k < g else zero

    def W(k):
        return var(f"w{k}") if 0 <= k <= g else (one if k == g + 1 else zero)

    return names, U, V, W


def _split(name: str) -> tuple[str, int]:
    return name[0], int(name[1:])


def coordinate_table(g: int, shift: int) -> dict:
    """Bracket table from the closed coordinate formulas.

    ``shift = 0`` gives the standard bracket, ``shift = 1`` the star bracket
    (all indices on the right-hand side raised by one).
    """
    names, U, V, W = _extended_coordinates(g)
    s = shift

    def upper(a: str, b: str) -> MPoly | None:
        (ka, i), (kb, j) = _split(a), _split(b)
        d0 = lambda k: 1 if k == 0 else 0
        if (ka, kb) == ("u", "v"):
            return U(i + j + 1 + s)
        if (ka, kb) == ("u", "w"):
            return V(i + j + 1 + s) * -2
        if (ka, kb) == ("v", "w"):
            return W(i + j + 1 + s) - U(i + s) * d0(j)
        if (ka, kb) == ("w", "w"):
            return (V(i + s) * d0(j) - V(j + s) * d0(i)) * 2
        if ka == kb:
            return MPoly(names)
        return None

    table = {}
    for a in names:
        for b in names:
            val = upper(a, b)
            if val is None:
                val = -upper(b, a)
            if not val.is_zero:
                table[(a, b)] = val
    return table


def generating_function_table(g: int, shift: int) -> dict:
    """Bracket table read off the generating functions in ``x`` and ``y``.

    With ``~p = [p / x**shift]_+`` the brackets are

        {u(x), v(y)} = DD(~u),   {u(x), w(y)} = -2 DD(~v),
        {v(x), w(y)} = DD(~w) - ~u(x),   {w(x), w(y)} = 2 (~v(x) - ~v(y)),

    where ``DD(p) = (p(x) - p(y)) / (x - y)``; the coefficient of
    ``x**i y**j`` is the bracket of the ``i``-th and ``j``-th coordinates.
    """
    names, U, V, W = _extended_coordinates(g)
    zero = MPoly(names)
    ut = [U(k + shift) for k in range(g + 1)]
    vt = [V(k + shift) for k in range(g)]
    wt = [W(k + shift) for k in range(g + 2)]

    def plus(terms: dict, extra: dict, sign=1) -> dict:
        out = dict(terms)
        for k, c in extra.items():
            out[k] = out.get(k, zero) + c * sign
        return out

    gen = {
        ("u", "v"): divided_difference_terms(ut),
        ("u", "w"): {k: c * -2 for k, c in divided_difference_terms(vt).items()},
        ("v", "w"): plus(divided_difference_terms(wt), {(i, 0): c for i, c in enumerate(ut)}, -1),
        ("w", "w"): plus(
            {(i, 0): c * 2 for i, c in enumerate(vt)}, {(0, j): c * 2 for j, c in enumerate(vt)}, -1
        ),
    }
    top = {"u": g - 1, "v": g - 1, "w": g}
    table = {}
    for (ka, kb), terms in gen.items():
        for (i, j), c in terms.items():
            if i > top[ka] or j > top[kb] or c.is_zero:
                continue
            a, b = f"{ka}{i}", f"{kb}{j}"
            table[(a, b)] = table.get((a, b), zero) + c
            # {w(x), w(y)} already lists both orders
            if ka != kb:
                table[(b, a)] = table.get((b, a), zero) - c
    return {k: c for k, c in table.items() if not c.is_zero}


@dataclass
class PoissonStructure:
    """A bracket on ``M_g`` given by its coordinate table."""

    name: str
    g: int
    table: dict
    _partials: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def variables(self) -> list[str]:
        return coordinate_names(self.g)

    @classmethod
    def standard(cls, g: int) -> "PoissonStructure":
        return cls("standard", g, coordinate_table(g, 0))

    @classmethod
    def star(cls, g: int) -> "PoissonStructure":
        return cls("star", g, coordinate_table(g, 1))

    def __add__(self, other: "PoissonStructure") -> "PoissonStructure":
        if other.g != self.g:
            raise ValueError("order mismatch")
        table = dict(self.table)
        for k, c in other.table.items():
            table[k] = table[k] + c if k in table else c
        table = {k: c for k, c in table.items() if not c.is_zero}
        return PoissonStructure(f"{self.name}+{other.name}", self.g, table)

    def entry(self, a: str, b: str) -> MPoly:
        return self.table.get((a, b), MPoly(self.variables))

    def is_antisymmetric(self) -> bool:
        names = self.variables
        return all((self.entry(a, b) + self.entry(b, a)).is_zero for a in names for b in names)

    def bracket(self, f: MPoly, h: MPoly) -> MPoly:
        return poisson_bracket(self, f, h)


def _check_vars(ps: PoissonStructure, *fs: MPoly) -> None:
    names = tuple(ps.variables)
    for f in fs:
        if f.vars != names:
            raise ValueError(f"polynomial lives on {f.vars}, bracket is on M_{ps.g}")


def poisson_bracket(ps: PoissonStructure, f: MPoly, h: MPoly) -> MPoly:
    """``{f, h} = sum_{a,b} df/da dh/db {a, b}``."""
    _check_vars(ps, f, h)
    names = ps.variables
    df = {a: f.diff(a) for a in names}
    dh = {b: h.diff(b) for b in names}
    out = MPoly(names)
    for (a, b), t in ps.table.items():
        if df[a].is_zero or dh[b].is_zero:
            continue
        out = out + df[a] * dh[b] * t
    return out


def hamiltonian_field(ps: PoissonStructure, f: MPoly) -> SymbolicField:
    """``X_f`` with the convention ``X_f(z) = {z, f}``."""
    _check_vars(ps, f)
    names = ps.variables
    comps = {z: poisson_bracket(ps, MPoly.var(names, z), f) for z in names}
    return SymbolicField(ps.g, comps)


def jacobi_defect(ps: PoissonStructure, f: MPoly, h: MPoly, k: MPoly) -> MPoly:
    br = lambda a, b: poisson_bracket(ps, a, b)
    return br(br(f, h), k) + br(br(h, k), f) + br(br(k, f), h)


def jacobi_failures(ps: PoissonStructure) -> list[tuple[str, str, str]]:
    """Coordinate triples on which the Jacobi identity fails."""
    names = ps.variables
    coords = {n: MPoly.var(names, n) for n in names}
    bad = []
    for a, b, c in itertools.combinations(names, 3):
        if not jacobi_defect(ps, coords[a], coords[b], coords[c]).is_zero:
            bad.append((a, b, c))
    return bad


# ---------------------------------------------------------------- mu_x and the two brackets


def _shift_down_map(g: int) -> dict:
    """Coordinate images of ``M_g`` coordinates on ``M_{g-1}`` under ``z_k -> z_{k-1}``.

    This is the pullback along ``A -> x * A``: the constant coefficients of
    ``x*u, x*v, x*w`` vanish and the monic top coefficients become 1.
    """
    src = coordinate_names(g - 1)
    images = {}
    for name in coordinate_names(g):
        kind, k = _split(name)
        j = k - 1
        if j < 0:
            images[name] = MPoly(src)
        elif kind == "u" and j == g - 1 or kind == "w" and j == g:
            images[name] = MPoly.const(src, 1)
        elif kind == "v" and j >= g - 1:
            images[name] = MPoly(src)
        else:
            images[name] = MPoly.var(src, f"{kind}{j}")
    return images


def mu_x_pullback_defects(g: int) -> list[tuple[str, str]]:
    """Coordinate pairs ``(a, b)`` of ``M_g`` with ``{a o mu_x, b o mu_x} != {a, b}^* o mu_x``.

    An empty list would mean ``mu_x : (M_{g-1}, standard) -> (M_g, star)`` is
    a Poisson morphism.
    """
    if g < 1:
        raise ValueError("g must be at least 1")
    images = _shift_down_map(g)
    src = coordinate_names(g - 1)
    std = PoissonStructure.standard(g - 1)
    star = PoissonStructure.star(g)
    bad = []
    for a in coordinate_names(g):
        for b in coordinate_names(g):
            lhs = poisson_bracket(std, images[a], images[b])
            rhs = star.entry(a, b).compose(images, src)
            if lhs != rhs:
                bad.append((a, b))
    return bad


def shifted_index_defects(g: int) -> list[tuple[str, str]]:
    """Pairs where ``{a, b}`` on ``M_{g-1}`` differs from ``{a, b}^*`` on ``M_g`` shifted down.

    Coordinates are matched by name; the star value is transported with
    ``z_k -> z_{k-1}``.  This is the index-level relation between the two
    tables.
    """
    if g < 2:
        raise ValueError("g must be at least 2")
    images = _shift_down_map(g)
    src = coordinate_names(g - 1)
    std = PoissonStructure.standard(g - 1)
    star = PoissonStructure.star(g)
    bad = []
    for a in src:
        for b in src:
            if std.entry(a, b) != star.entry(a, b).compose(images, src):
                bad.append((a, b))
    return bad


# ---------------------------------------------------------------- pushforward identities


@dataclass
class PushforwardReport:
    degree: int
    sampled_checks: int
    sampled_ok: int
    formal_ok: bool
    shift_law_ok: bool | None
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.sampled_ok == self.sampled_checks
            and self.formal_ok
            and self.shift_law_ok is not False
        )

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "sampled_checks": self.sampled_checks,
            "sampled_ok": self.sampled_ok,
            "formal_ok": self.formal_ok,
            "shift_law_ok": self.shift_law_ok,
            "failures": self.failures,
            "ok": self.ok,
        }


def pushforward_identity_check(
    p: Poly, a: MumfordMatrix, trials: int = 5, rng: random.Random | None = None
) -> PushforwardReport:
    """Check ``D_y`` at ``p*a`` against ``p(y) * (p * D_y at a)``.

    Three checks: the identity at ``trials`` rational ``y``; the formal
    identity in ``y`` by comparing ``y**k`` coefficients,
    ``D_k at p*a = sum_i p_{k-i} (p * D_i at a)``; and for ``p = x**n`` the
    shift law ``D_{n+i} at p*a = x**n D_i at a`` with ``D_k = 0`` for
    ``k < n``.
    """
    require_exact(p, a.u, a.v, a.w)
    rng = rng or random.Random(0)
    pa = mu_P(p, a)
    n = p.degree
    rep = PushforwardReport(n, trials, 0, True, None)
    for _ in range(trials):
        y = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        lhs = lax_field_at(pa, y)
        rhs = lax_field_at(a, y).pushforward(p) * p(y)
        if lhs == rhs:
            rep.sampled_ok += 1
        else:
            rep.failures.append(f"pointwise identity fails at y={y}")
    pushed = [lax_field_i(a, i).pushforward(p) for i in range(a.g)]
    for k in range(pa.g + 1):
        expected = TangentValue.zero(pa.g)
        for i, d in enumerate(pushed):
            c = p.coeff(k - i) if k - i >= 0 else 0
            if c:
                expected = expected + d * c
        if lax_field_i(pa, k) != expected:
            rep.formal_ok = False
            rep.failures.append(f"coefficient of y^{k} differs")
    if n > 0 and p == Poly.monomial(n):
        rep.shift_law_ok = all(lax_field_i(pa, k).is_zero for k in range(n)) and all(
            lax_field_i(pa, n + i) == pushed[i] for i in range(a.g)
        )
        if not rep.shift_law_ok:
            rep.failures.append("index shift law fails")
    return rep


def random_pushforward_pair(rng: random.Random, max_g: int = 3, max_n: int = 3):
    """A random monic ``p`` of positive degree and a random exact point."""
    g = rng.randint(0, max_g)
    n = rng.randint(1, max_n)
    if rng.random() < 0.3:
        p = Poly.monomial(n)
    else:
        p = Poly.from_roots(Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(n))
    return p, random_matrix(g, rng)
