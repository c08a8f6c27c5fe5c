"""Command-line interface.

Every construction and check is exposed as a subcommand with JSON (or CSV
polyline) output, suitable for scripting and figure reproduction.  Exit
codes: 0 success, 1 failed check or invalid construction, 2 I/O or parse
errors, 3 resource caps.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import __version__
from .checks import run_all
from .dial import (
    DialConfig,
    build_dial_map,
    dial_entropy_check,
    find_a_star,
    r_of_a,
    with_a_star,
)
from .ellone import ell1_witness, gamma_schedule
from .entropy import entropy_bounds, horseshoe_max
from .errors import EntropyBanachError, ResourceLimitError
from .plmap import PLMap, make_pl
from .rational import parse_q, qstr
from .serialize import (
    bounds_to_obj,
    certificate_to_obj,
    dial_config_to_obj,
    dumps,
    pl_from_obj,
    pl_to_obj,
    write_polyline,
)
from .spaces import FunctionFamily, horseshoe_combination, independent_points
from .universal import make_schedule, psi, psi_horseshoe

TENT = make_pl([0, Fraction(1, 2), 1], [0, 1, 0])


@dataclass(frozen=True)
class RunManifest:
    """What a run did: command, parameters, files written, timing, version."""

    subcommand: str
    parameters: dict
    outputs: list[str]
    wall_time: float
    library_version: str


def _emit(text: str, out: str | None) -> list[str]:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
        return [out]
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")
    return []


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise SystemExit(_fail(2, f"no such file: {path}"))
    except json.JSONDecodeError as exc:
        raise SystemExit(_fail(
            2, f"malformed JSON in {path} at line {exc.lineno}, column {exc.colno}"))


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_pl(path: str) -> PLMap:
    return pl_from_obj(_load_json(path))


def _cmd_entropy(args) -> int:
    f = _load_pl(args.input)
    eb = entropy_bounds(f, args.depth)
    _emit(dumps(bounds_to_obj(eb)), args.out)
    return 0


def _cmd_horseshoe(args) -> int:
    f = _load_pl(args.input)
    d, cert = horseshoe_max(f)
    _emit(dumps({"d": d, "certificate": certificate_to_obj(cert)}), args.out)
    return 0


def _cmd_thmb(args) -> int:
    obj = _load_json(args.input)
    members = tuple(pl_from_obj(m) for m in obj["members"])
    family = FunctionFamily(members=members, label=obj.get("label", ""))
    if args.grid:
        grid = [parse_q(tok) for tok in args.grid.split(",")]
    else:
        lo = min(m.breakpoints[0] for m in members)
        hi = max(m.breakpoints[-1] for m in members)
        grid = [lo + (hi - lo) * Fraction(k, 32) for k in range(33)]
    pts = independent_points(family, grid)
    f, cert = horseshoe_combination(family, pts)
    payload = {
        "points": [qstr(x) for x in pts.points],
        "determinant": qstr(pts.gram_determinant),
        "combination": pl_to_obj(f),
        "certificate": certificate_to_obj(cert),
        "entropy_lower_bound": cert.rate,
    }
    _emit(dumps(payload), args.out)
    return 0


def _cmd_psi(args) -> int:
    f = _load_pl(args.input)
    parameter = parse_q(args.ratio if args.schedule == "geometric" else args.alpha)
    sched = make_schedule(args.schedule, parameter, args.N)
    g = psi(f, sched)
    cert = psi_horseshoe(f, sched, args.horseshoe) if args.horseshoe else None
    outputs = []
    if args.format == "csv":
        buf = io.StringIO()
        write_polyline(buf, g, f"psi {args.schedule} N={args.N}")
        outputs += _emit(buf.getvalue(), args.out)
    else:
        payload = {"embedded": pl_to_obj(g),
                   "certificate": certificate_to_obj(cert)}
        outputs += _emit(dumps(payload), args.out)
    if args.polyline:
        with open(args.polyline, "w", encoding="utf-8") as handle:
            write_polyline(handle, g, f"psi {args.schedule} N={args.N}")
        outputs.append(args.polyline)
    return 0


def _cmd_figure1(args) -> int:
    sched = make_schedule("geometric", parse_q(args.ratio), args.N)
    g = psi(TENT, sched)
    buf = io.StringIO()
    write_polyline(buf, TENT, "source tent map", samples=args.samples)
    write_polyline(buf, g, f"embedded copy ladder ratio={args.ratio} N={args.N}",
                   samples=args.samples)
    _emit(buf.getvalue(), args.out)
    return 0


def _cmd_ell1(args) -> int:
    from .serialize import witness_to_obj
    schedule = gamma_schedule(args.steps, parse_q(args.tail_factor))
    report = ell1_witness(parse_q(args.delta), args.steps, schedule)
    outputs = _emit(dumps(witness_to_obj(report)), args.out)
    if args.polyline:
        with open(args.polyline, "w", encoding="utf-8") as handle:
            write_polyline(handle, report.f, f"witness M={args.steps}")
        outputs.append(args.polyline)
    return 0


def _cmd_dial(args) -> int:
    cfg = DialConfig(t=args.t, d=args.d, truncation=args.N,
                     lambda_grid_size=args.lambda_grid,
                     entropy_depth=args.depth, tolerance=args.tol)
    if args.a_star:
        cfg = with_a_star(cfg, parse_q(args.a_star))
    else:
        cfg = with_a_star(cfg, find_a_star(args.t, cfg))
    est = r_of_a(cfg.a_star, cfg)
    f = build_dial_map(cfg)
    lambdas = [parse_q(tok) for tok in args.check_lambdas.split(",")] \
        if args.check_lambdas else []
    records = dial_entropy_check(cfg, lambdas) if lambdas else []
    payload = {
        "config": dial_config_to_obj(cfg),
        "r_at_a_star": {"value": est.value, "bracket_width": est.bracket_width,
                        "argmax_multiplier": qstr(est.argmax),
                        "precision_warning": est.warning},
        "map": pl_to_obj(f),
        "checks": [
            {
                "lambda": qstr(rec.lam),
                "achieved": bounds_to_obj(rec.achieved) if rec.achieved else None,
                "lambda_star": qstr(rec.lambda_star),
                "nearest_multiplier": (qstr(rec.nearest_multiplier)
                                       if rec.nearest_multiplier is not None
                                       else None),
                "tendency_lower": rec.tendency_lower,
                "scales": [
                    {"n": s.n, "lambda_n": qstr(s.lambda_n),
                     "multiplier": qstr(s.multiplier),
                     "in_window": s.in_window,
                     "diagonal_crossing": s.diagonal_crossing,
                     "bounds": bounds_to_obj(s.bounds)}
                    for s in rec.scales
                ],
            }
            for rec in records
        ],
    }
    outputs = _emit(dumps(payload), args.out)
    if args.polyline:
        with open(args.polyline, "w", encoding="utf-8") as handle:
            write_polyline(handle, f, f"dial map t={args.t} d={args.d} N={args.N}")
        outputs.append(args.polyline)
    return 0


def _cmd_check(args) -> int:
    started = time.time()
    results = run_all(seed=args.seed)
    outputs = []
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} criterion {res.number}: {res.name} "
              f"({res.detail}) [{res.seconds:.1f}s]")
    manifest = RunManifest(
        subcommand="check",
        parameters={"seed": args.seed},
        outputs=outputs,
        wall_time=time.time() - started,
        library_version=__version__,
    )
    body = {"manifest": asdict(manifest),
            "results": [asdict(r) for r in results]}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(dumps(body))
    return 0 if all(r.passed for r in results) else 1


def _add_common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    """Global flags, accepted both before and after the subcommand."""
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--out", default=default,
                        help="write the primary output to this file")
    parser.add_argument("--seed", type=int,
                        default=argparse.SUPPRESS if suppress else 0,
                        help="seed for randomized checks")
    parser.add_argument("--cap-breakpoints", type=int, default=default,
                        help="override the composition breakpoint cap")
    parser.add_argument("--format", choices=("json", "csv"),
                        default=argparse.SUPPRESS if suppress else "json",
                        help="output format where both make sense")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entropy-banach",
        description="exact piecewise-linear calculus with certified entropy "
                    "bounds, horseshoe builders, isometric embeddings, and an "
                    "entropy dial")
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="certified entropy bracket of a PL map")
    p.add_argument("input", help="PL map JSON file")
    p.add_argument("--depth", type=int, default=8)
    _add_common(p, suppress=True)
    p.set_defaults(func=_cmd_entropy)

    p = sub.add_parser("horseshoe", help="largest certified horseshoe of a PL map")
    p.add_argument("input", help="PL map JSON file")
    _add_common(p, suppress=True)
    p.set_defaults(func=_cmd_horseshoe)

    p = sub.add_parser("thmB", help="alternating horseshoe combination "
                                    "from a function family")
    p.add_argument("input", help="family JSON file: {label, members: [...]}")
    p.add_argument("--grid", help="comma-separated rational search grid")
    _add_common(p, suppress=True)
    p.set_defaults(func=_cmd_thmb)

    p = sub.add_parser("psi", help="multiscale isometric embedding of a map on [0,1]")
    p.add_argument("input", help="PL map JSON file")
    p.add_argument("--schedule", choices=("geometric", "hoelder"),
                   default="geometric")
    p.add_argument("--ratio", default="2/3", help="geometric amplitude ratio")
    p.add_argument("--alpha", default="1/2", help="hoelder exponent")
    p.add_argument("--N", type=int, default=8, help="truncation level")
    p.add_argument("--horseshoe", type=int, default=0,
                   help="also certify a horseshoe of this order")
    p.add_argument("--polyline", help="also write a CSV polyline here")
    _add_common(p, suppress=True)
    p.set_defaults(func=_cmd_psi)

    p = sub.add_parser("figure1", help="CSV polylines of the tent map and its "
                                       "embedded copy ladder")
    p.add_argument("--ratio", default="2/3")
    p.add_argument("--N", type=int, default=6)
    p.add_argument("--samples", type=int, default=0,
                   help="resample the polylines at this many points")
    _add_common(p, suppress=True)
    p.set_defaults(func=_cmd_figure1)

    p = sub.add_parser("ell1", help="staged infinite-entropy witness in the "
                                    "sum-norm model")
    p.add_argument("--steps", type=int, default=3)
    p.add_argument("--delta", default="1/4096",
                   help="relative ramp half-width of the sign model")
    p.add_argument("--tail-factor", default="2", dest="tail_factor")
    p.add_argument("--polyline", help="also write the witness polyline here")
    _add_common(p, suppress=True)
    p.set_defaults(func=_cmd_ell1)

    p = sub.add_parser("dial", help="build the fixed-entropy dial map and "
                                    "check multipliers")
    p.add_argument("--t", type=float, required=True, help="target entropy")
    p.add_argument("--d", type=int, default=3, help="odd branch count")
    p.add_argument("--N", type=int, default=12, help="number of scales")
    p.add_argument("--lambda-grid", type=int, default=101, dest="lambda_grid")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-2)
    p.add_argument("--a-star", dest="a_star",
                   help="skip the dial search and use this parameter")
    p.add_argument("--check-lambdas", dest="check_lambdas", default="",
                   help="comma-separated multipliers to check, e.g. 1/2,1,2")
    p.add_argument("--polyline", help="also write the dial-map polyline here")
    _add_common(p, suppress=True)
    p.set_defaults(func=_cmd_dial)

    p = sub.add_parser("check", help="run the full acceptance suite")
    _add_common(p, suppress=True)
    p.set_defaults(func=_cmd_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.cap_breakpoints is not None:
        os.environ["ENTROPY_BANACH_CAP"] = str(args.cap_breakpoints)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        return _fail(3, str(exc))
    except EntropyBanachError as exc:
        return _fail(1, str(exc))
    except OSError as exc:
        return _fail(2, str(exc))


if __name__ == "__main__":
    sys.exit(main())
