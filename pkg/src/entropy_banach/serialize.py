"""JSON and CSV exchange formats.

Rationals travel as decimal-free ``"p/q"`` strings (plain integers are
accepted as shorthand on input); entropy rates are JSON floats.  Every
emitter round-trips through its parser.
"""

from __future__ import annotations

import json
import math
from typing import IO, Sequence

from .dial import DialConfig
from .ellone import WitnessReport, WitnessStep
from .entropy import EntropyBounds, HorseshoeCertificate
from .errors import ConstructionError
from .plmap import IntervalQ, PLMap, eval_at, make_pl
from .rational import parse_q, qstr


def pl_to_obj(f: PLMap) -> dict:
    return {"breakpoints": [qstr(x) for x in f.breakpoints],
            "values": [qstr(y) for y in f.values]}


def pl_from_obj(obj: dict) -> PLMap:
    if not isinstance(obj, dict) or "breakpoints" not in obj or "values" not in obj:
        raise ConstructionError("a PL map object needs 'breakpoints' and 'values'")
    xs = [parse_q(x) for x in obj["breakpoints"]]
    ys = [parse_q(y) for y in obj["values"]]
    return make_pl(xs, ys)


def interval_to_obj(iv: IntervalQ) -> list[str]:
    return [qstr(iv.lo), qstr(iv.hi)]


def interval_from_obj(obj: Sequence) -> IntervalQ:
    if len(obj) != 2:
        raise ConstructionError("an interval is a [lo, hi] pair")
    return IntervalQ(parse_q(obj[0]), parse_q(obj[1]))


def certificate_to_obj(cert: HorseshoeCertificate | None) -> dict | None:
    if cert is None:
        return None
    return {"d": cert.d, "k": cert.iterate,
            "intervals": [interval_to_obj(iv) for iv in cert.intervals]}


def certificate_from_obj(obj: dict | None) -> HorseshoeCertificate | None:
    if obj is None:
        return None
    return HorseshoeCertificate(
        d=int(obj["d"]), iterate=int(obj["k"]),
        intervals=tuple(interval_from_obj(iv) for iv in obj["intervals"]))


def bounds_to_obj(eb: EntropyBounds) -> dict:
    upper = eb.upper if math.isfinite(eb.upper) else None
    return {"lower": eb.lower, "upper": upper, "depth": eb.depth_used,
            "certificate": certificate_to_obj(eb.lower_witness)}


def bounds_from_obj(obj: dict) -> EntropyBounds:
    upper = obj["upper"] if obj["upper"] is not None else math.inf
    return EntropyBounds(
        lower=float(obj["lower"]), upper=float(upper),
        lower_witness=certificate_from_obj(obj.get("certificate")),
        depth_used=int(obj["depth"]))


def witness_step_to_obj(step: WitnessStep) -> dict:
    return {
        "m": step.m,
        "n": step.n_m,
        "epsilon": qstr(step.epsilon),
        "J": interval_to_obj(step.J),
        "window": qstr(step.window),
        "rows": list(step.rows),
        "points": [qstr(p) for p in step.points],
        "beta": [qstr(b) for b in step.beta],
        "alpha": [qstr(a) for a in step.alpha],
        "oscillation_prev": qstr(step.oscillation_prev),
        "tail": qstr(step.tail),
        "certificate": certificate_to_obj(step.certificate),
    }


def witness_to_obj(report: WitnessReport) -> dict:
    return {
        "x0": qstr(report.x0),
        "coefficient_l1_norm": qstr(report.coefficient_l1_norm),
        "f": pl_to_obj(report.f),
        "steps": [witness_step_to_obj(s) for s in report.steps],
    }


def witness_from_obj(obj: dict) -> WitnessReport:
    steps = tuple(
        WitnessStep(
            m=int(s["m"]), n_m=int(s["n"]), epsilon=parse_q(s["epsilon"]),
            J=interval_from_obj(s["J"]), window=parse_q(s["window"]),
            rows=tuple(int(r) for r in s["rows"]),
            points=tuple(parse_q(p) for p in s["points"]),
            beta=tuple(parse_q(b) for b in s["beta"]),
            alpha=tuple(parse_q(a) for a in s["alpha"]),
            oscillation_prev=parse_q(s["oscillation_prev"]),
            tail=parse_q(s["tail"]),
            certificate=certificate_from_obj(s["certificate"]))
        for s in obj["steps"])
    return WitnessReport(
        f=pl_from_obj(obj["f"]), steps=steps,
        coefficient_l1_norm=parse_q(obj["coefficient_l1_norm"]),
        basis=(), x0=parse_q(obj["x0"]))


def dial_config_to_obj(cfg: DialConfig) -> dict:
    return {
        "t": cfg.t,
        "d": cfg.d,
        "a_star": qstr(cfg.a_star) if cfg.a_star is not None else None,
        "truncation": cfg.truncation,
        "lambda_grid_size": cfg.lambda_grid_size,
        "entropy_depth": cfg.entropy_depth,
        "tolerance": cfg.tolerance,
    }


def dial_config_from_obj(obj: dict) -> DialConfig:
    a_star = obj.get("a_star")
    return DialConfig(
        t=float(obj["t"]), d=int(obj["d"]),
        a_star=parse_q(a_star) if a_star is not None else None,
        truncation=int(obj["truncation"]),
        lambda_grid_size=int(obj["lambda_grid_size"]),
        entropy_depth=int(obj["entropy_depth"]),
        tolerance=float(obj["tolerance"]))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2)


def write_polyline(stream: IO[str], f: PLMap, label: str,
                   samples: int = 0) -> None:
    """CSV polyline ``x,y`` with a ``# label`` header.

    With ``samples`` > 0 the map is resampled uniformly over its domain;
    otherwise the exact breakpoints are emitted.
    """
    stream.write(f"# {label}\n")
    if samples > 0:
        lo, hi = f.breakpoints[0], f.breakpoints[-1]
        step = (hi - lo) / samples
        points = [lo + k * step for k in range(samples + 1)]
    else:
        points = list(f.breakpoints)
    for x in points:
        stream.write(f"{float(x)!r},{float(eval_at(f, x))!r}\n")
