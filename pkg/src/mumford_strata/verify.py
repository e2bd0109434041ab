"""Conformance suites: randomized oracle comparisons and exact identities.

Each suite returns counts per named check.  A suite passes when no check
has failures.  ``structures`` lets a caller substitute bracket tables, which
is how the negative control (a corrupted table) is exercised.
"""
from __future__ import annotations

import itertools
import random
from collections import OrderedDict
from fractions import Fraction
from typing import Callable

from .algebra import X, MPoly, Poly, gcd, gcd_many
from .dynamics import (
    PoissonStructure,
    generating_function_table,
    h_polys,
    hamiltonian_field,
    jacobi_failures,
    poisson_bracket,
    pushforward_identity_check,
    random_pushforward_pair,
    shifted_index_defects,
    sigma_of_matrix,
    symbolic_field,
)
from .exactlinalg import Matrix, confluent_vandermonde_kernel, kernel_basis, rank
from .mumford import SpectralPoly, quadratic_divisors, random_matrix, rho_of_matrix
from .resultants import (
    build_mult_matrix,
    gcd_degree_multi,
    gcd_degree_pair,
    resultant_chain_conditions,
    subresultant_sequence,
)
from .strata import (
    classify,
    decompose_fiber_point,
    enumerate_strata,
    jacobian_moment,
    sample_stratum,
)

SUITES = ("resultants", "poisson", "strata")


class Tally:
    def __init__(self):
        self.counts: OrderedDict = OrderedDict()
        self.notes: list[str] = []

    def check(self, tag: str, ok: bool, note: str | None = None) -> None:
        passed, failed = self.counts.get(tag, (0, 0))
        self.counts[tag] = (passed + bool(ok), failed + (not ok))
        if not ok and note and len(self.notes) < 20:
            self.notes.append(f"{tag}: {note}")

    @property
    def ok(self) -> bool:
        return all(f == 0 for _, f in self.counts.values())

    def to_dict(self) -> dict:
        return {
            "checks": {t: {"passed": p, "failed": f} for t, (p, f) in self.counts.items()},
            "failures": self.notes,
            "ok": self.ok,
        }


def random_poly(rng: random.Random, max_degree: int, monic: bool = False, root_bias: bool = True) -> Poly:
    """Random exact polynomial; often built from shared small roots so gcds are nontrivial."""
    deg = rng.randint(1 if monic else 0, max_degree)
    if root_bias and rng.random() < 0.6:
        k = rng.randint(0, deg)
        p = Poly.from_roots(rng.randint(-2, 2) for _ in range(k))
        rest = deg - k
        p = p * Poly([Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(rest)] + [1])
    else:
        p = Poly([Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(deg)] + [1])
    if not monic:
        p = p * Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 2))
    return p


# ---------------------------------------------------------------- resultants


def check_pair(p: Poly, q: Poly, tally: Tally) -> None:
    d = gcd(p, q)
    tally.check("gcd_degree_pair", gcd_degree_pair(p, q) == d.degree, f"{p}, {q}")
    rep = subresultant_sequence(p, q)
    tally.check("subresultant_first_nonzero", rep.first_nonzero == d.degree, f"{p}, {q}")
    tally.check("subresultant_gcd", rep.gcd_candidate == d, f"{p}, {q}")


def check_multi(polys: list, tally: Tally) -> None:
    d = gcd_many(polys).degree
    tally.check("gcd_degree_multi", gcd_degree_multi(polys) == d, ", ".join(map(str, polys)))
    if len(polys) == 3:
        u, v, w = polys[0], polys[1], polys[2].monic()
        threshold = max(i for i in range(u.degree + 2) if resultant_chain_conditions(u, v, w, i))
        tally.check("resultant_chain_threshold", threshold == d, ", ".join(map(str, polys)))


def random_gcd_tuple(rng: random.Random, k: int, max_degree: int = 6) -> list:
    common = Poly.from_roots(rng.randint(-2, 2) for _ in range(rng.randint(0, 2)))
    out = []
    for j in range(k):
        extra = random_poly(rng, max(0, max_degree - common.degree), monic=(j == 0))
        out.append(common * extra if j == 0 else common * extra * rng.choice([1, 2, Fraction(-1, 2)]))
    return out


def random_factored_monic(rng: random.Random, max_degree: int = 5) -> list[tuple]:
    roots: dict = {}
    for _ in range(rng.randint(1, max_degree)):
        r = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
        roots[r] = roots.get(r, 0) + 1
    return sorted(roots.items())


def check_kernel(roots: list, l: int, tally: Tally) -> None:
    p = Poly.from_roots(r for r, m in roots for _ in range(m))
    m = build_mult_matrix(p, l)
    vecs = confluent_vandermonde_kernel(roots, l)
    ok = len(vecs) == p.degree and all(all(x == 0 for x in m.matvec(v)) for v in vecs)
    ok = ok and rank(Matrix.from_rows(vecs)) == p.degree
    tally.check("kernel_basis", ok, f"{p}, l={l}")


def suite_resultants(seed: int = 0, pairs: int = 100, tuples: int = 60, kernels: int = 30) -> Tally:
    rng = random.Random(seed)
    tally = Tally()
    for _ in range(pairs):
        check_pair(random_poly(rng, 8, monic=True), random_poly(rng, 8), tally)
    for _ in range(tuples):
        check_multi(random_gcd_tuple(rng, rng.choice([3, 4])), tally)
    for _ in range(kernels):
        check_kernel(random_factored_monic(rng), rng.randint(1, 4), tally)
    for _ in range(kernels):
        m = Matrix.from_rows([[rng.randint(-2, 2) for _ in range(5)] for _ in range(4)])
        tally.check("rank_nullity", rank(m) + len(kernel_basis(m)) == m.cols)
    return tally


# ---------------------------------------------------------------- Poisson and Lax fields


def default_structures(g: int) -> dict[str, PoissonStructure]:
    std, star = PoissonStructure.standard(g), PoissonStructure.star(g)
    return {"standard": std, "star": star, "standard+star": std + star}


def suite_poisson(
    seed: int = 0,
    max_g: int = 3,
    structures: Callable[[int], dict] | None = None,
) -> Tally:
    tally = Tally()
    make = structures or default_structures
    for g in range(1, max_g + 1):
        table = make(g)
        for name, ps in table.items():
            tally.check("antisymmetry", ps.is_antisymmetric(), f"{name} g={g}")
            bad = jacobi_failures(ps)
            tally.check("jacobi", not bad, f"{name} g={g}: {bad[:3]}")
        std = table.get("standard")
        if std is None:
            continue
        if structures is None:
            for shift, ps in ((0, table["standard"]), (1, table["star"])):
                tally.check("generating_function_table", generating_function_table(g, shift) == ps.table, f"g={g}")
        if g <= 2:
            hs = h_polys(g)
            for i in range(g):
                tally.check("hamiltonian_equals_lax", hamiltonian_field(std, hs[i]) == symbolic_field(g, i), f"g={g} i={i}")
                field = symbolic_field(g, i)
                for j, hj in enumerate(hs):
                    tally.check("tangency", field.lie_derivative(hj).is_zero, f"g={g} i={i} j={j}")
            for a, b in itertools.combinations(hs, 2):
                tally.check("involution", poisson_bracket(std, a, b).is_zero, f"g={g}")
        if g >= 2 and structures is None:
            tally.check("shifted_index_correspondence", not shifted_index_defects(g), f"g={g}")
    return tally


# ---------------------------------------------------------------- strata


FIXTURES = (X**3, X**3 * (X - 1) ** 2)


def suite_strata(seed: int = 0, corpus: int = 60, pushforwards: int = 20) -> Tally:
    rng = random.Random(seed)
    tally = Tally()
    for _ in range(corpus):
        g = rng.randint(1, 3)
        a = random_matrix(g, rng)
        rho, _ = rho_of_matrix(a)
        tally.check("sigma_equals_g_minus_rho", sigma_of_matrix(a) == g - rho, str(a))
        tally.check("jacobian_rank", rank(jacobian_moment(a)) == 2 * g + 1 - rho, str(a))
    for _ in range(pushforwards):
        p, a = random_pushforward_pair(rng)
        rep = pushforward_identity_check(p, a, trials=3, rng=rng)
        tally.check("pushforward", rep.ok, f"{p}, {a}: {rep.failures}")
    for hpoly in FIXTURES:
        h = SpectralPoly(hpoly)
        lattice = enumerate_strata(h)
        rho_h = quadratic_divisors(h).rho_h
        counts = lattice.coarse_counts()
        tally.check("coarse_count", len(counts) == rho_h + 1, f"{hpoly}: {counts}")
        tally.check("unique_deepest_stratum", lattice.maximal_codimension.q.degree == rho_h, str(hpoly))
        for lab in lattice.labels:
            try:
                a = sample_stratum(lab, seed=seed)
                tally.check("sample_round_trip", classify(a, h) == lab, str(lab))
                q, aprime, hprime = decompose_fiber_point(a, h)
                tally.check("decompose_recompose", q == lab.q and rho_of_matrix(aprime)[0] == 0, str(lab))
                tally.check("jacobian_rank", rank(jacobian_moment(a)) == 2 * h.g + 1 - q.degree, str(lab))
            except (ArithmeticError, ValueError, RuntimeError) as exc:
                tally.check("sample_round_trip", False, f"{lab}: {exc}")
        for coarse, fine in lattice.edges:
            drop = coarse.i - fine.i
            tally.check("closure_dimension_drop", drop == fine.q.degree - coarse.q.degree and drop > 0)
    return tally


RUNNERS = {"resultants": suite_resultants, "poisson": suite_poisson, "strata": suite_strata}


def run_verify(suite: str = "all", seed: int = 0, structures=None) -> dict:
    """Run one suite or all of them; ``report["ok"]`` is the overall verdict."""
    names = SUITES if suite == "all" else (suite,)
    if any(n not in RUNNERS for n in names):
        raise ValueError(f"unknown suite {suite!r}; choose from all, {', '.join(SUITES)}")
    report = {"suites": {}, "seed": seed}
    for n in names:
        if n == "poisson":
            tally = suite_poisson(seed, structures=structures)
        else:
            tally = RUNNERS[n](seed)
        report["suites"][n] = tally.to_dict()
    report["ok"] = all(s["ok"] for s in report["suites"].values())
    return report


def corrupted_structures(g: int) -> dict[str, PoissonStructure]:
    """Negative control: the standard table with one entry perturbed."""
    std = PoissonStructure.standard(g)
    table = dict(std.table)
    names = std.variables
    a, b = names[0], names[-1]
    extra = MPoly.var(names, names[0])
    table[(a, b)] = table.get((a, b), MPoly(names)) + extra
    table[(b, a)] = table.get((b, a), MPoly(names)) - extra
    return {"corrupted": PoissonStructure("corrupted", g, {k: c for k, c in table.items() if not c.is_zero})}
