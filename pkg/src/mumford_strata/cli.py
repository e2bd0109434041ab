"""Command-line interface; every command prints one JSON document.

Exit status is 0 on success, 1 when a verification reports failures and 2
on errors (which print ``{"error": ...}``).
"""
from __future__ import annotations

import argparse
import sys

from .algebra import ExactModeRequired, epsilon
from .dynamics import lax_field_i, sigma_of_matrix, symbolic_field
from .exactlinalg import rank
from .flow import flow_integrate
from .mumford import ConventionError, moment_map, rho_of_matrix
from .serialize import (
    dumps,
    load_json,
    matrix_point_from_json,
    matrix_point_to_json,
    poly_from_json,
    poly_to_json,
    scalar_matrix_to_json,
    spectral_from_json,
    spectral_to_json,
)
from .strata import (
    StratumLabel,
    classify,
    decompose_fiber_point,
    enumerate_strata,
    jacobian_moment,
    sample_stratum,
    smoothness_report,
)
from .verify import run_verify


def _label_json(lab: StratumLabel) -> dict:
    return {"g": lab.g, "i": lab.i, "q": poly_to_json(lab.q), "dimension": lab.dimension}


def _tangent_json(t) -> dict:
    return {"du": poly_to_json(t.du), "dv": poly_to_json(t.dv), "dw": poly_to_json(t.dw)}


def cmd_classify(args) -> tuple[dict, int]:
    a = matrix_point_from_json(load_json(args.point))
    h = spectral_from_json(load_json(args.h)) if args.h else moment_map(a)
    lab = classify(a, h)
    q, aprime, hprime = decompose_fiber_point(a, h)
    rho, _ = rho_of_matrix(a)
    return {
        "label": _label_json(lab),
        "rho": rho,
        "sigma": lab.i,
        "regular_part": matrix_point_to_json(aprime),
        "reduced_h": spectral_to_json(hprime),
    }, 0


def cmd_fiber_strata(args) -> tuple[dict, int]:
    h = spectral_from_json(load_json(args.h))
    lattice = enumerate_strata(h)
    out = {
        "g": h.g,
        "h": spectral_to_json(h.with_factors() if h.h.is_exact else h),
        "strata": [_label_json(l) for l in lattice.labels],
        "coarse_counts": {str(k): v for k, v in lattice.coarse_counts().items()},
        "closure_edges": [
            {"closure_of": poly_to_json(c.q), "contains": poly_to_json(f.q)} for c, f in lattice.edges
        ],
    }
    if args.check:
        out["smoothness"] = smoothness_report(h, args.samples, args.seed)
        return out, 0 if out["smoothness"]["ok"] else 1
    return out, 0


def cmd_sample(args) -> tuple[dict, int]:
    h = spectral_from_json(load_json(args.h))
    q = poly_from_json(load_json(args.q)) if args.q else None
    if q is None:
        if args.i is None:
            raise ValueError("give --q or --i")
        found = [l for l in enumerate_strata(h).labels if l.i == args.i]
        if len(found) != 1:
            raise ValueError(f"{len(found)} strata have i = {args.i}; pass --q to choose one")
        lab = found[0]
    else:
        i = h.g - q.degree if args.i is None else args.i
        lab = StratumLabel(h.g, i, q, h)
    mode = "exact" if args.exact else args.mode
    pairs = load_json(args.pairs) if args.pairs else None
    a = sample_stratum(lab, seed=args.seed, mode=mode, pairs=pairs)
    out = {"label": _label_json(lab), "mode": mode, "seed": args.seed, "point": matrix_point_to_json(a)}
    if mode == "exact":
        out["round_trip"] = classify(a, h) == lab
        return out, 0 if out["round_trip"] else 1
    return out, 0


def cmd_jacobian(args) -> tuple[dict, int]:
    a = matrix_point_from_json(load_json(args.point))
    j = jacobian_moment(a)
    out = {"jacobian": scalar_matrix_to_json(j), "rank": rank(j)}
    if a.is_exact:
        rho, _ = rho_of_matrix(a)
        out["rho"] = rho
        out["expected_rank"] = 2 * a.g + 1 - rho
        return out, 0 if out["rank"] == out["expected_rank"] else 1
    return out, 0


def cmd_verify(args) -> tuple[dict, int]:
    rep = run_verify(args.suite, seed=args.seed)
    return rep, 0 if rep["ok"] else 1


def cmd_flow(args) -> tuple[dict, int]:
    a = matrix_point_from_json(load_json(args.point))
    rep = flow_integrate(a, args.i, args.t, args.dt, backend=args.backend)
    return rep.to_dict(), 0


def cmd_vector_fields(args) -> tuple[dict, int]:
    if args.point:
        a = matrix_point_from_json(load_json(args.point))
        indices = [args.i] if args.i is not None else list(range(a.g))
        out = {"g": a.g, "fields": {str(i): _tangent_json(lax_field_i(a, i)) for i in indices}}
        if a.is_exact:
            out["sigma"] = sigma_of_matrix(a)
        return out, 0
    if args.g is None:
        raise ValueError("give --point or --g")
    indices = [args.i] if args.i is not None else list(range(args.g))
    fields = {}
    for i in indices:
        f = symbolic_field(args.g, i)
        fields[str(i)] = {name: str(c) for name, c in f.components.items()}
    return {"g": args.g, "symbolic": fields}, 0


class _JsonArgumentParser(argparse.ArgumentParser):
    """Usage errors are reported as JSON like every other failure."""

    def error(self, message):
        _emit({"error": message, "kind": "usage"}, None)
        raise SystemExit(2)


def _common() -> argparse.ArgumentParser:
    p = _JsonArgumentParser(add_help=False)
    p.add_argument("--mode", choices=("exact", "float"), default=argparse.SUPPRESS)
    p.add_argument("--epsilon", type=float, default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--out", default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _JsonArgumentParser(prog="mumford-strata", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="stratum label of a fiber point")
    p.add_argument("--point", required=True)
    p.add_argument("--h")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("fiber-strata", parents=[common], help="strata of a fiber")
    p.add_argument("--h", required=True)
    p.add_argument("--check", action="store_true", help="sample every stratum and check rank laws")
    p.add_argument("--samples", type=int, default=2)
    p.set_defaults(func=cmd_fiber_strata)

    p = sub.add_parser("sample", parents=[common], help="a point of a given stratum")
    p.add_argument("--h", required=True)
    p.add_argument("--i", type=int)
    p.add_argument("--q")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--pairs", help="JSON list of [a, b] with b**2 = h(a)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("jacobian", parents=[common], help="Jacobian of the moment map")
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("verify", parents=[common], help="run conformance suites")
    p.add_argument("suite", nargs="?", default="all", choices=("all", "resultants", "poisson", "strata"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("flow", parents=[common], help="RK4 flow of D_i with conservation report")
    p.add_argument("--point", required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--backend", choices=("numba", "numpy"))
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("vector-fields", parents=[common], help="D_i at a point or symbolically")
    p.add_argument("--point")
    p.add_argument("--g", type=int)
    p.add_argument("--i", type=int)
    p.set_defaults(func=cmd_vector_fields)
    return parser


def _emit(doc: dict, out: str | None) -> None:
    text = dumps(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("mode", "exact"), ("epsilon", 1e-9), ("seed", 0), ("out", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        if not args.epsilon > 0:
            raise ValueError("--epsilon must be positive")
        with epsilon(args.epsilon):
            doc, code = args.func(args)
    except (ValueError, ArithmeticError, RuntimeError, OSError, KeyError, TypeError) as exc:
        kind = "exact_mode_required" if isinstance(exc, ExactModeRequired) else type(exc).__name__
        if isinstance(exc, ConventionError):
            kind = "convention_error"
        _emit({"error": str(exc), "kind": kind}, None)
        return 2
    _emit(doc, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
