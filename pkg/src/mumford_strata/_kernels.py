"""Float kernels for the Lax flow: field evaluation and fixed-step RK4.

Coordinates are a complex128 vector ``u_0..u_{g-1}, v_0..v_{g-1}, w_0..w_g``.
Two implementations share one calling convention: plain numpy, and numba
``@njit`` loops.  ``MUMFORD_STRATA_NUMBA=0`` selects numpy; numba is also
skipped when it cannot be imported.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def numba_enabled() -> bool:
    flag = os.environ.get("MUMFORD_STRATA_NUMBA", "1").strip().lower()
    return numba is not None and flag not in ("0", "false", "no", "off")


# ---------------------------------------------------------------- numpy path


def _parts_np(z, g):
    one = np.ones(1, dtype=np.complex128)
    u = np.concatenate((z[:g], one))
    v = z[g:2 * g]
    w = np.concatenate((z[2 * g:3 * g + 1], one))
    return u, v, w


def _conv(a, b):
    if a.size == 0 or b.size == 0:
        return np.zeros(1, dtype=np.complex128)
    return np.convolve(a, b)


def _take(p, n):
    out = np.zeros(n, dtype=np.complex128)
    k = min(n, p.size)
    out[:k] = p[:k]
    return out


def _sub(a, b):
    n = max(a.size, b.size)
    return _take(a, n) - _take(b, n)


def lax_rhs_numpy(z, g, i):
    """Flattened ``D_i`` at ``z``."""
    u, v, w = _parts_np(z, g)
    p = v[i + 1:]
    q = u[i + 1:]
    r = w[i + 1:].copy()
    r[0] -= u[i]
    du = 2 * _sub(_conv(v, q), _conv(u, p))
    dv = _sub(_conv(u, r), _conv(q, w))
    dw = 2 * _sub(_conv(w, p), _conv(v, r))
    return np.concatenate((_take(du, g), _take(dv, g), _take(dw, g + 1)))


def spectral_numpy(z, g):
    """Coefficients ``h_0..h_{2g}`` of ``v**2 + u*w``."""
    u, v, w = _parts_np(z, g)
    h = _take(_conv(u, w), 2 * g + 1)
    if g:
        h[: 2 * g - 1] += _conv(v, v)[: 2 * g - 1]
    return h


def rk4_numpy(z0, g, i, dt, steps):
    """RK4 for ``steps`` steps; returns ``(z, drift, ok)``.

    ``drift[j]`` is the maximum over time of ``|h_j(t) - h_j(0)|`` divided by
    ``max(1, |h_j(0)|)``; ``ok`` is False once a non-finite value appears.
    """
    z = z0.astype(np.complex128).copy()
    h0 = spectral_numpy(z, g)
    scale = np.maximum(1.0, np.abs(h0))
    drift = np.zeros(2 * g + 1)
    # overflow is detected below and reported through ``ok``
    with np.errstate(all="ignore"):
        for _ in range(steps):
            k1 = lax_rhs_numpy(z, g, i)
            k2 = lax_rhs_numpy(z + 0.5 * dt * k1, g, i)
            k3 = lax_rhs_numpy(z + 0.5 * dt * k2, g, i)
            k4 = lax_rhs_numpy(z + dt * k3, g, i)
            z = z + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            if not np.all(np.isfinite(z)):
                return z, drift, False
            drift = np.maximum(drift, np.abs(spectral_numpy(z, g) - h0) / scale)
    return z, drift, True


# ---------------------------------------------------------------- numba path

if numba is not None:

    @numba.njit(cache=True)
    def _coef(z, g, kind, k):
        # kind 0: u, 1: v, 2: w, with the monic tops and zero beyond
        if kind == 0:
            if k < g:
                return z[k]
            return 1.0 + 0j if k == g else 0j
        if kind == 1:
            return z[g + k] if k < g else 0j
        if k <= g:
            return z[2 * g + k]
        return 1.0 + 0j if k == g + 1 else 0j

    @numba.njit(cache=True)
    def _b_coef(z, g, i, kind, k):
        # coefficients of [A / x**(i+1)]_+ minus u_i in the lower-left entry
        c = _coef(z, g, kind, k + i + 1)
        if kind == 2 and k == 0:
            c -= _coef(z, g, 0, i)
        return c

    @numba.njit(cache=True)
    def _prod(z, g, i, ka, kb, n):
        # coefficient n of (A entry ka) * (B entry kb)
        acc = 0j
        for m in range(n + 1):
            acc += _coef(z, g, ka, m) * _b_coef(z, g, i, kb, n - m)
        return acc

    @numba.njit(cache=True)
    def lax_rhs_numba(z, g, i):
        out = np.zeros(3 * g + 1, dtype=np.complex128)
        for n in range(g):
            out[n] = 2 * (_prod(z, g, i, 1, 0, n) - _prod(z, g, i, 0, 1, n))
            out[g + n] = _prod(z, g, i, 0, 2, n) - _prod(z, g, i, 2, 0, n)
        for n in range(g + 1):
            out[2 * g + n] = 2 * (_prod(z, g, i, 2, 1, n) - _prod(z, g, i, 1, 2, n))
        return out

    @numba.njit(cache=True)
    def spectral_numba(z, g):
        h = np.zeros(2 * g + 1, dtype=np.complex128)
        for n in range(2 * g + 1):
            acc = 0j
            for m in range(n + 1):
                acc += _coef(z, g, 1, m) * _coef(z, g, 1, n - m)
                acc += _coef(z, g, 0, m) * _coef(z, g, 2, n - m)
            h[n] = acc
        return h

    @numba.njit(cache=True)
    def rk4_numba(z0, g, i, dt, steps):
        z = z0.copy()
        h0 = spectral_numba(z, g)
        drift = np.zeros(2 * g + 1)
        for _ in range(steps):
            k1 = lax_rhs_numba(z, g, i)
            k2 = lax_rhs_numba(z + 0.5 * dt * k1, g, i)
            k3 = lax_rhs_numba(z + 0.5 * dt * k2, g, i)
            k4 = lax_rhs_numba(z + dt * k3, g, i)
            z = z + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            for k in range(z.size):
                if not (np.isfinite(z[k].real) and np.isfinite(z[k].imag)):
                    return z, drift, False
            h = spectral_numba(z, g)
            for j in range(h.size):
                d = abs(h[j] - h0[j]) / max(1.0, abs(h0[j]))
                if d > drift[j]:
                    drift[j] = d
        return z, drift, True

else:  # pragma: no cover
    lax_rhs_numba = spectral_numba = rk4_numba = None


def select(backend: str | None = None):
    """``(name, rhs, spectral, rk4)`` for ``backend`` in ``numba``, ``numpy`` or None (auto)."""
    if backend is None:
        backend = "numba" if numba_enabled() else "numpy"
    if backend == "numba":
        if numba is None:
            raise RuntimeError("numba is not available")
        return "numba", lax_rhs_numba, spectral_numba, rk4_numba
    if backend == "numpy":
        return "numpy", lax_rhs_numpy, spectral_numpy, rk4_numpy
    raise ValueError(f"unknown backend {backend!r}")
