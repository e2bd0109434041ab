from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy as sp

from mumford_strata.algebra import ONE, X, ExactModeRequired, Poly
from mumford_strata.dynamics import sigma_of_matrix
from mumford_strata.exactlinalg import rank
from mumford_strata.mumford import MumfordMatrix, SpectralPoly, coordinate_names, moment_map, random_matrix, rho_of_matrix
from mumford_strata.strata import (
    SearchExhausted,
    StratumLabel,
    classify,
    decompose_fiber_point,
    degeneration_indices,
    enumerate_strata,
    jacobian_from_h_polys,
    jacobian_moment,
    rational_sqrt,
    sample_stratum,
    smoothness_report,
)

CUSP = SpectralPoly(X**3)
TWO_NODES = SpectralPoly(X**3 * (X - 1) ** 2)


def regular_split_point() -> MumfordMatrix:
    """Genus-two regular point with u = (x - 1)(x - 2); its h is squarefree."""
    return MumfordMatrix(2, (X - 1) * (X - 2), X + 3, X**3 + X + 5)


def test_label_validation():
    with pytest.raises(ValueError):
        StratumLabel(1, 0, X - 1, CUSP)  # (x - 1)**2 does not divide x**3
    with pytest.raises(ValueError):
        StratumLabel(1, 1, X, CUSP)  # degree mismatch
    with pytest.raises(ValueError):
        StratumLabel(2, 1, X, CUSP)
    assert StratumLabel(1, 0, X, CUSP).dimension == 0


def test_cusp_strata():
    lat = enumerate_strata(CUSP)
    assert [(l.i, l.q) for l in lat.labels] == [(1, ONE), (0, X)]
    assert lat.coarse_counts() == {0: 1, 1: 1}
    assert lat.maximal_codimension.q == X


def test_two_node_strata():
    lat = enumerate_strata(TWO_NODES)
    assert lat.coarse_counts() == {0: 1, 1: 2, 2: 1}
    assert lat.maximal_codimension.q == X * (X - 1)
    assert len(lat.edges) == 4
    for coarse, fine in lat.edges:
        assert lat.in_closure(fine, coarse)
        assert not lat.in_closure(coarse, fine)
        assert coarse.i - fine.i == 1


def test_classify_examples():
    a = MumfordMatrix(1, X, Poly(), X**2)
    lab = classify(a, CUSP)
    assert lab.i == 0 and lab.q == X
    b = MumfordMatrix(1, X - 1, Poly.const(1), X**2 + X + 1)
    assert classify(b, CUSP).i == 1
    with pytest.raises(ValueError):
        classify(b, TWO_NODES)
    with pytest.raises(ExactModeRequired):
        classify(MumfordMatrix.from_coordinates(1, [0j, 0j, 0j, 0j]), CUSP)


def test_sampling_examples():
    lab = enumerate_strata(TWO_NODES).label_for(X**2 - X)
    a = sample_stratum(lab)
    assert (a.u, a.v, a.w) == (X**2 - X, Poly(), X**3 - X**2)


@pytest.mark.parametrize("h", [CUSP, TWO_NODES, SpectralPoly(X**5 * (X + 1) ** 2)], ids=str)
def test_sample_round_trip_every_stratum(h):
    for lab in enumerate_strata(h).labels:
        for seed in (0, 1):
            a = sample_stratum(lab, seed=seed)
            assert moment_map(a).h == h.h
            assert classify(a, h) == lab


def test_float_sampling_lands_on_fiber():
    from mumford_strata.mumford import fiber_contains

    for lab in enumerate_strata(TWO_NODES).labels:
        a = sample_stratum(lab, seed=3, mode="float")
        assert not a.is_exact
        assert fiber_contains(TWO_NODES, a)


def test_squarefree_fiber_needs_pairs():
    """Genus-two curves have finitely many rational points, so the search can run dry."""
    a = regular_split_point()
    h = moment_map(a)
    lab = StratumLabel(2, 2, ONE, h)
    with pytest.raises(SearchExhausted):
        sample_stratum(lab, budget=200)
    b = sample_stratum(lab, pairs=[(1, a.v(1)), (2, a.v(2))])
    assert b == a
    assert classify(b, h) == lab


def test_pairs_are_validated():
    a = regular_split_point()
    lab = StratumLabel(2, 2, ONE, moment_map(a))
    with pytest.raises(ValueError):
        sample_stratum(lab, pairs=[(1, a.v(1))])
    with pytest.raises(ValueError):
        sample_stratum(lab, pairs=[(1, a.v(1)), (1, a.v(1))])
    with pytest.raises(ValueError):
        sample_stratum(lab, pairs=[(1, a.v(1) + 1), (2, a.v(2))])
    with pytest.raises(ValueError):
        sample_stratum(lab, mode="symbolic")


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(Fraction(-1)) is None


def test_decompose_recompose():
    lab = enumerate_strata(TWO_NODES).label_for(X - 1)
    a = sample_stratum(lab)
    q, ap, hp = decompose_fiber_point(a, TWO_NODES)
    assert q == X - 1 and rho_of_matrix(ap)[0] == 0
    assert moment_map(ap).h == hp.h == X**3
    assert q * ap == a


def test_jacobian_example():
    j = jacobian_moment(MumfordMatrix(1, X, Poly(), X**2))
    assert j.to_rows() == [[0, 0, 1], [0, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert rank(j) == 2


def sympy_jacobian(a: MumfordMatrix) -> sp.Matrix:
    names = coordinate_names(a.g)
    syms = sp.symbols(names)
    t = sp.Symbol("t")
    g = a.g
    u = sum(syms[k] * t**k for k in range(g)) + t**g
    v = sum(syms[g + k] * t**k for k in range(g))
    w = sum(syms[2 * g + k] * t**k for k in range(g + 1)) + t ** (g + 1)
    h = sp.Poly(sp.expand(v**2 + u * w), t)
    coeffs = [h.coeff_monomial(t**k) for k in range(2 * g + 1)]
    jac = sp.Matrix([[sp.diff(c, s) for c in coeffs] for s in syms])
    vals = {s: sp.Rational(c.numerator, c.denominator) for s, c in zip(syms, a.coordinates())}
    return jac.subs(vals)


def test_jacobian_matches_sympy_and_rank_law():
    rng = random.Random(9)
    for _ in range(20):
        a = random_matrix(rng.randint(1, 3), rng)
        j = jacobian_moment(a)
        assert j == jacobian_from_h_polys(a)
        assert [[sp.Rational(c.numerator, c.denominator) for c in r] for r in j.to_rows()] == sympy_jacobian(a).tolist()
        assert rank(j) == 2 * a.g + 1 - rho_of_matrix(a)[0]


@pytest.mark.parametrize("h", [CUSP, TWO_NODES], ids=str)
def test_smoothness_report(h):
    rep = smoothness_report(h, samples_per_stratum=2)
    assert rep["ok"], rep
    singular = [s for s in rep["strata"] if s["singular"]]
    assert len(singular) == len(rep["strata"]) - 1


def test_two_node_ranks_by_stratum():
    rep = smoothness_report(TWO_NODES, samples_per_stratum=1)
    ranks = {tuple(s["q"]): s["jacobian_ranks"][0] for s in rep["strata"]}
    assert ranks == {("1",): 5, ("0", "1"): 4, ("-1", "1"): 4, ("0", "-1", "1"): 3}


def test_degeneration_path_drops_index_at_end():
    h = TWO_NODES
    start = sample_stratum(enumerate_strata(h).label_for(ONE))
    end = sample_stratum(enumerate_strata(h).label_for(X**2 - X))
    path = degeneration_indices(start, end, steps=10)
    assert path[0] == (0, 2)
    assert path[-1] == (1, 0)
    # upper semicontinuity: the endpoint index never exceeds nearby values
    assert all(s >= path[-1][1] for _, s in path)
    assert sigma_of_matrix(end) == 0
