from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from mumford_strata.algebra import Poly

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

small_rationals = st.builds(
    Fraction, st.integers(min_value=-6, max_value=6), st.integers(min_value=1, max_value=4)
)


@st.composite
def polys(draw, max_degree: int = 6, monic: bool = False, nonzero: bool = False):
    deg = draw(st.integers(min_value=0, max_value=max_degree))
    coeffs = draw(st.lists(small_rationals, min_size=deg, max_size=deg))
    if monic:
        return Poly(coeffs + [1])
    lead = draw(small_rationals.filter(lambda c: c != 0)) if nonzero else draw(small_rationals)
    return Poly(coeffs + [lead])


@st.composite
def rooted_polys(draw, max_degree: int = 6):
    """Monic products of small linear factors, so repeated roots and shared factors are common."""
    roots = draw(st.lists(st.integers(min_value=-2, max_value=2), max_size=max_degree))
    return Poly.from_roots(roots)


@pytest.fixture
def rng():
    import random

    return random.Random(20240601)


# ---------------------------------------------------------------- acceptance summary

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance(request):
    """``acceptance(n, ok, detail)`` prints one verdict line and records it for the summary."""
    lines = request.config.stash[_ACCEPTANCE]

    def record(n: int, ok: bool, detail: str) -> bool:
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        lines.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
