"""JSON encoding of scalars, polynomials, points and spectral polynomials.

Rationals are written as ``"num/den"`` strings and complex numbers as
``[re, im]`` so exact values never pass through floats.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .algebra import MPoly, Poly
from .exactlinalg import Matrix
from .mumford import MumfordMatrix, SpectralPoly


def scalar_to_json(c) -> Any:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    c = complex(c)
    return [c.real, c.imag]


def scalar_from_json(obj) -> Fraction | complex:
    if isinstance(obj, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(obj, str):
        return Fraction(obj.strip())
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, float):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    raise ValueError(f"cannot read scalar from {obj!r}")


def poly_to_json(p: Poly) -> dict:
    return {"coeffs": [scalar_to_json(c) for c in p.coeffs]}


def poly_from_json(obj) -> Poly:
    if isinstance(obj, dict):
        if "coeffs" not in obj:
            raise ValueError("polynomial object needs a 'coeffs' list")
        obj = obj["coeffs"]
    if not isinstance(obj, list):
        raise ValueError("polynomial must be {'coeffs': [...]} or a list")
    return Poly(scalar_from_json(c) for c in obj)


def matrix_point_to_json(a: MumfordMatrix) -> dict:
    return {"g": a.g, "u": poly_to_json(a.u), "v": poly_to_json(a.v), "w": poly_to_json(a.w)}


def matrix_point_from_json(obj: dict) -> MumfordMatrix:
    try:
        return MumfordMatrix(int(obj["g"]), poly_from_json(obj["u"]), poly_from_json(obj["v"]), poly_from_json(obj["w"]))
    except KeyError as exc:
        raise ValueError(f"point is missing field {exc}") from None


def spectral_to_json(h: SpectralPoly) -> dict:
    out = {"h": poly_to_json(h.h)}
    if h.factors is not None:
        out["factors"] = [[poly_to_json(f), k] for f, k in h.factors]
    return out


def spectral_from_json(obj) -> SpectralPoly:
    if isinstance(obj, dict) and "h" in obj:
        factors = obj.get("factors")
        if factors is not None:
            factors = tuple((poly_from_json(f), int(k)) for f, k in factors)
        return SpectralPoly(poly_from_json(obj["h"]), factors)
    return SpectralPoly(poly_from_json(obj))


def scalar_matrix_to_json(m: Matrix) -> dict:
    return {"rows": m.rows, "cols": m.cols, "entries": [scalar_to_json(c) for c in m.entries]}


def mpoly_to_json(f: MPoly) -> str:
    return str(f)


def load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, indent=2)
