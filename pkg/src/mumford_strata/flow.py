"""Fixed-step RK4 integration of the Lax fields ``D_i`` with a conservation report."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .mumford import MumfordMatrix, coordinate_names

MIN_DT = 1e-12
MAX_STEPS = 100_000_000


class FlowError(RuntimeError):
    pass


@dataclass
class FlowReport:
    g: int
    i: int
    t_final: float
    dt: float
    steps: int
    backend: str
    final: list
    drift: list  # per h_j, max over time of the relative change

    @property
    def max_drift(self) -> float:
        return max(self.drift) if self.drift else 0.0

    def final_point(self) -> MumfordMatrix:
        return MumfordMatrix.from_coordinates(self.g, self.final)

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "i": self.i,
            "t_final": self.t_final,
            "dt": self.dt,
            "steps": self.steps,
            "backend": self.backend,
            "final": {n: [c.real, c.imag] for n, c in zip(coordinate_names(self.g), self.final)},
            "drift": self.drift,
            "max_drift": self.max_drift,
        }


def _coords(a: MumfordMatrix) -> np.ndarray:
    return np.array([complex(c) for c in a.coordinates()], dtype=np.complex128)


def flow_integrate(
    a: MumfordMatrix, i: int, t_final: float, dt: float, backend: str | None = None
) -> FlowReport:
    """Integrate ``dA/dt = D_i(A)`` from ``a`` over ``[0, t_final]``."""
    if not 0 <= i < a.g:
        raise ValueError(f"need 0 <= i < g, got i={i}, g={a.g}")
    if not (math.isfinite(dt) and math.isfinite(t_final)):
        raise FlowError("t and dt must be finite")
    if dt <= 0 or t_final < 0:
        raise FlowError("need dt > 0 and t >= 0")
    if dt < MIN_DT:
        raise FlowError(f"step underflow: dt = {dt} < {MIN_DT}")
    steps = round(t_final / dt)
    if steps > MAX_STEPS:
        raise FlowError(f"step underflow: {steps} steps exceed {MAX_STEPS}")
    if abs(steps * dt - t_final) > 1e-9 * max(1.0, t_final):
        raise FlowError("t must be an integer multiple of dt")
    z0 = _coords(a)
    if not np.all(np.isfinite(z0)):
        raise FlowError("non-finite starting point")
    name, _, _, rk4 = _kernels.select(backend)
    z, drift, ok = rk4(z0, a.g, i, float(dt), int(steps))
    if not ok:
        raise FlowError("non-finite values during integration")
    return FlowReport(a.g, i, float(t_final), float(dt), int(steps), name, [complex(c) for c in z], [float(d) for d in drift])


def drift_ratio(a: MumfordMatrix, i: int, t_final: float, dt: float, backend: str | None = None):
    """``(drift at dt, drift at dt/2, ratio)`` using the maximum relative drift."""
    coarse = flow_integrate(a, i, t_final, dt, backend).max_drift
    fine = flow_integrate(a, i, t_final, dt / 2, backend).max_drift
    return coarse, fine, (coarse / fine if fine > 0 else math.inf)
