from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from conftest import small_rationals
from mumford_strata.algebra import X, MPoly, Poly
from mumford_strata.dynamics import (
    PoissonStructure,
    TangentValue,
    coordinate_table,
    generating_function_table,
    h_polys,
    hamiltonian_field,
    jacobi_failures,
    lax_field_at,
    lax_field_i,
    lax_field_series,
    mu_x_pullback_defects,
    poisson_bracket,
    pushforward_identity_check,
    random_pushforward_pair,
    shifted_index_defects,
    sigma_of_matrix,
    symbolic_field,
)
from mumford_strata.mumford import MumfordMatrix, moment_map, random_matrix, rho_of_matrix

xs, ys = sp.symbols("x y")


@st.composite
def points(draw, max_g=3):
    g = draw(st.integers(min_value=1, max_value=max_g))
    coords = draw(st.lists(small_rationals, min_size=3 * g + 1, max_size=3 * g + 1))
    return MumfordMatrix.from_coordinates(g, coords)


def sym(p: Poly, var=xs):
    return sum((sp.Rational(c.numerator, c.denominator) * var**k for k, c in enumerate(p.coeffs)), sp.Integer(0))


def sympy_lax(a: MumfordMatrix, y):
    """``[A(x), B]`` with B built from divided differences, computed by sympy."""
    u, v, w = sym(a.u), sym(a.v), sym(a.w)
    dd = lambda f: sp.cancel((f - f.subs(xs, y)) / (xs - y))
    p, q, r = dd(v), dd(u), dd(w) - u.subs(xs, y)
    A = sp.Matrix([[v, u], [w, -v]])
    B = sp.Matrix([[p, q], [r, -p]])
    C = (A * B - B * A).applyfunc(sp.expand)
    return C[0, 1], C[0, 0], C[1, 0]


def test_tangent_degree_validation():
    with pytest.raises(ValueError):
        TangentValue(1, X, Poly(), Poly())
    t = TangentValue(2, X, Poly.const(1), X**2)
    assert (t - t).is_zero
    assert (t * 2).du == 2 * X
    assert t.pushforward(X).du == X**2


@given(points(), small_rationals)
def test_lax_field_matches_sympy_commutator(a, y):
    t = lax_field_at(a, y)
    du, dv, dw = sympy_lax(a, sp.Rational(y.numerator, y.denominator))
    assert sp.expand(sym(t.du) - du) == 0
    assert sp.expand(sym(t.dv) - dv) == 0
    assert sp.expand(sym(t.dw) - dw) == 0


@given(points(), small_rationals)
def test_generating_field_is_series_of_d_i(a, y):
    assert lax_field_at(a, y) == lax_field_series(a, y)


@given(points())
def test_fields_are_tangent_to_fibers(a):
    for i in range(a.g):
        t = lax_field_i(a, i)
        # d/dt (v**2 + u w) = 2 v dv + du w + u dw
        assert 2 * a.v * t.dv + t.du * a.w + a.u * t.dw == Poly()


@given(points(), st.integers(min_value=0, max_value=5))
def test_high_index_fields_vanish(a, k):
    assert lax_field_i(a, a.g + k).is_zero


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        lax_field_i(MumfordMatrix(1, X, Poly(), X**2), -1)


def test_d0_at_genus_one_example():
    # a = (x + 1, 2, x**2): p = 0, q = 1, r = x - 1
    a = MumfordMatrix(1, X + 1, Poly.const(2), X**2)
    t = lax_field_i(a, 0)
    assert t.du == Poly.const(4) and t.dv == Poly.const(-1) and t.dw == 4 - 4 * X


def test_sigma_equals_g_minus_rho():
    rng = random.Random(2)
    for _ in range(40):
        a = random_matrix(rng.randint(1, 3), rng)
        assert sigma_of_matrix(a) == a.g - rho_of_matrix(a)[0]


# ---------------------------------------------------------------- Poisson structures


@pytest.mark.parametrize("g", [1, 2, 3])
@pytest.mark.parametrize("which", ["standard", "star", "sum"])
def test_jacobi_and_antisymmetry(g, which):
    std, star = PoissonStructure.standard(g), PoissonStructure.star(g)
    ps = {"standard": std, "star": star, "sum": std + star}[which]
    assert ps.is_antisymmetric()
    assert jacobi_failures(ps) == []


@pytest.mark.parametrize("g", [1, 2, 3])
@pytest.mark.parametrize("shift", [0, 1])
def test_coordinate_table_matches_generating_function(g, shift):
    assert coordinate_table(g, shift) == generating_function_table(g, shift)


def test_bracket_table_examples():
    std = PoissonStructure.standard(1)
    names = std.variables
    one = MPoly.const(names, 1)
    # {u0, v0} = U(1) = 1, {u0, w0} = -2 V(1) = 0, {v0, w0} = W(1) - U(0)
    assert std.entry("u0", "v0") == one
    assert std.entry("u0", "w0").is_zero
    assert std.entry("v0", "w0") == MPoly.var(names, "w1") - MPoly.var(names, "u0")
    assert std.entry("v0", "u0") == -one


@pytest.mark.parametrize("g", [1, 2, 3])
def test_standard_bracket_involutive(g):
    hs = h_polys(g)
    std = PoissonStructure.standard(g)
    for a, b in itertools.combinations(hs, 2):
        assert poisson_bracket(std, a, b).is_zero


def test_star_bracket_not_involutive_beyond_genus_one():
    """The shifted bracket Poisson-commutes the h_i only at g = 1."""
    hs = h_polys(1)
    star = PoissonStructure.star(1)
    assert all(poisson_bracket(star, a, b).is_zero for a, b in itertools.combinations(hs, 2))
    for g in (2, 3):
        hs = h_polys(g)
        star = PoissonStructure.star(g)
        assert any(not poisson_bracket(star, a, b).is_zero for a, b in itertools.combinations(hs, 2))


@pytest.mark.parametrize("g", [1, 2])
def test_hamiltonian_fields_are_lax_fields(g):
    std = PoissonStructure.standard(g)
    hs = h_polys(g)
    for i in range(g):
        assert hamiltonian_field(std, hs[i]) == symbolic_field(g, i)


@given(points(max_g=2))
def test_symbolic_field_evaluates_to_numeric(a):
    for i in range(a.g):
        assert symbolic_field(a.g, i).evaluate(a) == lax_field_i(a, i)


def test_h_polys_evaluate_to_moment_map():
    a = MumfordMatrix.from_coordinates(2, [1, 2, 3, 4, 5, 6, 7])
    h = moment_map(a).h
    assert [f.subs(a.point()) for f in h_polys(2)] == [h.coeff(k) for k in range(5)]


def test_mu_x_literal_pullback_fails():
    """Pulling the shifted bracket back along p -> x*p does not give the standard one."""
    assert len(mu_x_pullback_defects(2)) == 12
    assert len(mu_x_pullback_defects(3)) == 38


@pytest.mark.parametrize("g", [2, 3])
def test_shifted_index_correspondence(g):
    assert shifted_index_defects(g) == []


# ---------------------------------------------------------------- push-forward along mu_P


def test_pushforward_example():
    a = MumfordMatrix(1, X - 1, Poly.const(2), X**2 + X)
    rep = pushforward_identity_check(X + 3, a)
    assert rep.ok, rep.failures


def test_pushforward_monomial_shift():
    a = MumfordMatrix(1, X + 2, Poly.const(-1), X**2)
    rep = pushforward_identity_check(X**2, a)
    assert rep.ok, rep.failures


def test_pushforward_randomized():
    rng = random.Random(4)
    for _ in range(25):
        p, a = random_pushforward_pair(rng)
        rep = pushforward_identity_check(p, a, trials=3, rng=rng)
        assert rep.ok, rep.to_dict()


def test_field_vanishes_at_common_root():
    rng = random.Random(8)
    for _ in range(20):
        g = rng.randint(1, 3)
        a = random_matrix(g, rng, rho=rng.randint(1, g))
        roots = [r for r in range(-2, 3) if a.u(r) == a.v(r) == a.w(r) == 0]
        assert roots
        for root in roots:
            assert lax_field_at(a, root).is_zero


def test_hamiltonian_sign_convention():
    std = PoissonStructure.standard(1)
    names = std.variables
    field = hamiltonian_field(std, h_polys(1)[0])
    assert field["u0"] == 2 * MPoly.var(names, "v0")
