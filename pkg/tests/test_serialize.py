from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given

from conftest import polys
from mumford_strata.algebra import X, Poly
from mumford_strata.mumford import MumfordMatrix, SpectralPoly
from mumford_strata.serialize import (
    dumps,
    matrix_point_from_json,
    matrix_point_to_json,
    poly_from_json,
    poly_to_json,
    scalar_from_json,
    scalar_to_json,
    spectral_from_json,
    spectral_to_json,
)


def test_scalar_forms():
    assert scalar_to_json(Fraction(-3, 4)) == "-3/4"
    assert scalar_to_json(Fraction(2)) == "2/1"
    assert scalar_to_json(1.5 + 2j) == [1.5, 2.0]
    assert scalar_from_json("6/8") == Fraction(3, 4)
    assert scalar_from_json(5) == Fraction(5)
    assert scalar_from_json(0.25) == 0.25 + 0j
    for bad in (True, None, [1, 2, 3], {"a": 1}):
        with pytest.raises(ValueError):
            scalar_from_json(bad)


@given(polys())
def test_poly_round_trip(p):
    text = dumps(poly_to_json(p))
    assert poly_from_json(json.loads(text)) == p


def test_poly_forms():
    assert poly_from_json(["1", 0, "1"]) == X**2 + 1
    with pytest.raises(ValueError):
        poly_from_json({"c": []})
    with pytest.raises(ValueError):
        poly_from_json("x + 1")


def test_point_and_spectral_round_trip():
    a = MumfordMatrix(1, X - Fraction(1, 3), Poly.const(2), X**2 + 5)
    assert matrix_point_from_json(json.loads(dumps(matrix_point_to_json(a)))) == a
    h = SpectralPoly(X**3 * (X - 1) ** 2).with_factors()
    back = spectral_from_json(json.loads(dumps(spectral_to_json(h))))
    assert back == h
    assert spectral_from_json(["0", "0", "0", "1"]).h == X**3
    with pytest.raises(ValueError):
        matrix_point_from_json({"g": 1, "u": [0, 1]})


def test_dumps_is_deterministic():
    assert dumps({"b": 1, "a": 2}) == dumps({"a": 2, "b": 1})
