"""Certified topological-entropy bounds for piecewise-linear maps.

Upper bounds come from the growth rate of lap numbers of iterates; lower
bounds come from exact horseshoe certificates and from covering (Markov)
transition matrices over critical-point partitions.  Both sides are computed
on the map restricted to its forward-invariant image hull, which is the
convention under which entropy of a boundedly-extended map is defined here.

All covering checks are exact rational comparisons; only the final rates
(log d / k and spectral radii) are floats.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ResourceLimitError
from .plmap import (
    IntervalQ,
    PLMap,
    compose,
    crop,
    eval_at,
    eval_many,
    image_interval,
    lap_count,
    make_pl,
)

#: horseshoe search is skipped on iterates with more monotone pieces than this
HORSESHOE_LAP_BUDGET = 1500

#: covering-matrix partitions refuse to grow beyond this many cells
PARTITION_CAP = 4096

_HULL_ROUNDS_CAP = 10_000
_POWER_TOL = 1e-10
_POWER_ITERS = 10_000


@dataclass(frozen=True)
class HorseshoeCertificate:
    """d intervals with disjoint interiors, each mapped over all of them by f^k."""

    d: int
    intervals: tuple[IntervalQ, ...]
    iterate: int = 1

    def __post_init__(self):
        if self.d < 2 or len(self.intervals) != self.d:
            raise ValueError(f"certificate needs d >= 2 intervals, got {self.d}")
        if self.iterate < 1:
            raise ValueError("certificate iterate must be >= 1")

    @property
    def rate(self) -> float:
        return math.log(self.d) / self.iterate


@dataclass(frozen=True)
class EntropyBounds:
    """Certified bracket [lower, upper] for the topological entropy."""

    lower: float
    upper: float
    lower_witness: HorseshoeCertificate | None
    depth_used: int

    def __post_init__(self):
        if self.lower > self.upper + 1e-12:
            raise ValueError(f"invalid bracket [{self.lower}, {self.upper}]")

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower


def invariant_restriction(f: PLMap) -> PLMap:
    """Crop f to the smallest f-invariant closed interval containing f(R).

    For a PL map with constant extension the image hull stabilizes after one
    expansion round; the loop is defensive and capped.
    """
    hull = image_interval(f, f.domain)
    for _ in range(_HULL_ROUNDS_CAP):
        img = image_interval(f, hull)
        if hull.contains(img):
            break
        hull = IntervalQ(min(hull.lo, img.lo), max(hull.hi, img.hi))
    else:
        raise ResourceLimitError("image-hull iteration did not stabilize",
                                 achieved=_HULL_ROUNDS_CAP)
    if hull.lo == hull.hi:
        return make_pl([hull.lo], [eval_at(f, hull.lo)])
    return crop(f, hull.lo, hull.hi)


def iterate(f: PLMap, k: int, cap: int | None = None) -> PLMap:
    """Exact PL representation of the k-th iterate f^k."""
    if k < 1:
        raise ValueError(f"iterate needs k >= 1, got {k}")
    result = f
    for step in range(2, k + 1):
        try:
            result = compose(f, result, cap=cap)
        except ResourceLimitError as exc:
            raise ResourceLimitError(
                f"breakpoint cap hit while building iterate {step}",
                achieved=step - 1, needed=exc.needed, cap=exc.cap) from exc
    return result


def _iterate_chain(f: PLMap, depth: int, cap: int | None) -> list[PLMap]:
    """[f, f^2, ..., f^depth], stopping early (never failing) at the cap."""
    chain = [f]
    for _ in range(depth - 1):
        try:
            chain.append(compose(f, chain[-1], cap=cap))
        except ResourceLimitError:
            break
    return chain


def entropy_upper_lap(f: PLMap, depth: int, cap: int | None = None) -> float:
    """min over k <= depth of log(laps(f^k)) / k; a valid upper bound.

    Monotone improving in depth; cap truncation only reduces the achieved
    depth and keeps the bound valid.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    best = math.inf
    for k, g in enumerate(_iterate_chain(f, depth, cap), start=1):
        best = min(best, math.log(lap_count(g)) / k)
    return best


def _monotone_pieces(f: PLMap) -> list[tuple[int, int]]:
    """Maximal monotone runs as (start, end) index pairs into f.breakpoints."""
    xs, ys = f.breakpoints, f.values
    if len(xs) == 1:
        return [(0, 0)]
    pieces = []
    start = 0
    prev_sign = 0
    for i in range(len(xs) - 1):
        d = ys[i + 1] - ys[i]
        sign = 0 if d == 0 else (1 if d > 0 else -1)
        if sign == 0:
            continue
        if prev_sign != 0 and sign != prev_sign:
            pieces.append((start, i))
            start = i
        prev_sign = sign
    pieces.append((start, len(xs) - 1))
    return pieces


def _piece_boxes(f: PLMap) -> list[tuple[Fraction, Fraction, Fraction, Fraction]]:
    """(x_left, x_right, value_min, value_max) per maximal monotone piece."""
    xs, ys = f.breakpoints, f.values
    boxes = []
    for (s, e) in _monotone_pieces(f):
        lo, hi = (ys[s], ys[e]) if ys[s] <= ys[e] else (ys[e], ys[s])
        boxes.append((xs[s], xs[e], lo, hi))
    return boxes


def branch_count(f: PLMap, u: Fraction, v: Fraction) -> int:
    """Number of monotone branches of f restricted to [u, v] covering [u, v].

    A branch is a maximal monotone interval of the restriction, so pieces
    cut by the hull boundary count with their cut image.
    """
    count = 0
    for (a, b, lo, hi) in _piece_boxes(f):
        lo_x, hi_x = max(a, u), min(b, v)
        if lo_x >= hi_x:
            continue
        img = image_interval(f, IntervalQ(lo_x, hi_x))
        if img.lo <= u and img.hi >= v:
            count += 1
    return count


def _branch_certificate(f: PLMap, u: Fraction, v: Fraction,
                        k: int) -> HorseshoeCertificate:
    """Exact preimage subintervals for the covering branches of hull [u, v]."""
    intervals: list[IntervalQ] = []
    for (s, e) in _monotone_pieces(f):
        xs = f.breakpoints
        a, b = xs[s], xs[e]
        lo_x, hi_x = max(a, u), min(b, v)
        if lo_x >= hi_x:
            continue
        img = image_interval(f, IntervalQ(lo_x, hi_x))
        if not (img.lo <= u and img.hi >= v):
            continue
        t_u = _first_hit(f, lo_x, hi_x, u)
        t_v = _first_hit(f, lo_x, hi_x, v)
        lo_t, hi_t = (t_u, t_v) if t_u <= t_v else (t_v, t_u)
        intervals.append(IntervalQ(lo_t, hi_t))
    return HorseshoeCertificate(d=len(intervals), intervals=tuple(intervals),
                                iterate=k)


def _first_hit(f: PLMap, lo_x: Fraction, hi_x: Fraction,
               target: Fraction) -> Fraction:
    """A point of [lo_x, hi_x] (inside one monotone piece) where f = target."""
    xs, ys = f.breakpoints, f.values
    prev_x, prev_y = lo_x, eval_at(f, lo_x)
    if prev_y == target:
        return prev_x
    i0 = bisect_right(xs, lo_x)
    i1 = bisect_left(xs, hi_x)
    nodes = [(xs[i], ys[i]) for i in range(i0, i1)] + [(hi_x, eval_at(f, hi_x))]
    for x, y in nodes:
        if y == target:
            return x
        if (prev_y < target < y) or (y < target < prev_y):
            return prev_x + (target - prev_y) * (x - prev_x) / (y - prev_y)
        prev_x, prev_y = x, y
    raise ValueError("target not attained on the covering branch")  # pragma: no cover


#: full breakpoint-pair search above this many candidates falls back to a
#: reduced (turning + diagonal-crossing) candidate set
_HULL_CANDIDATE_LIMIT = 4000


def _diagonal_crossings(f: PLMap) -> list[Fraction]:
    """Exact solutions of f(x) = x segment by segment."""
    xs, ys = f.breakpoints, f.values
    out = []
    for i in range(len(xs) - 1):
        d0 = ys[i] - xs[i]
        d1 = ys[i + 1] - xs[i + 1]
        if d0 == 0:
            out.append(xs[i])
        if (d0 < 0 < d1) or (d1 < 0 < d0):
            s = d0 / (d0 - d1)
            out.append(xs[i] + s * (xs[i + 1] - xs[i]))
    if ys[-1] == xs[-1]:
        out.append(xs[-1])
    return out


def _hull_candidates(f: PLMap) -> list[Fraction]:
    if len(f.breakpoints) <= _HULL_CANDIDATE_LIMIT:
        return list(f.breakpoints)
    pts = set(_turning_positions(f))
    pts.update(_diagonal_crossings(f))
    return sorted(pts)


def horseshoe_max(f: PLMap) -> tuple[int, HorseshoeCertificate | None]:
    """Largest d such that some hull [u, v] has d covering monotone branches.

    Hulls run over pairs of breakpoints (for oversized maps: turning points
    plus diagonal crossings, which is where boundary-branch covering can
    switch).  Every piece contributes to a hull either fully inside
    (x-extent within [u, v], value range containing it) or cut at one end;
    in each case the admissible (u, v) form a rectangle of candidate
    indices, accumulated exactly on a 2D difference grid.  Returns
    (1, None) when no 2-horseshoe exists at this resolution.
    """
    pts = _hull_candidates(f)
    n = len(pts)
    if n < 2:
        return 1, None
    xs, ys = f.breakpoints, f.values
    grid = np.zeros((n + 1, n + 1), dtype=np.int32)

    def add_box(il, ir, jl, jr):
        if il > ir or jl > jr:
            return
        grid[il, jl] += 1
        grid[il, jr + 1] -= 1
        grid[ir + 1, jl] -= 1
        grid[ir + 1, jr + 1] += 1

    boxes = _piece_boxes(f)
    for (a, b, lo, hi) in boxes:
        if lo == hi:
            continue
        # fully inside: lo <= u <= a and b <= v <= hi
        add_box(bisect_left(pts, lo), bisect_right(pts, a) - 1,
                bisect_left(pts, b), bisect_right(pts, hi) - 1)
    # boundary-cut branches: candidates strictly inside a piece
    piece_idx = 0
    for k, u in enumerate(pts):
        while piece_idx < len(boxes) - 1 and boxes[piece_idx][1] <= u:
            piece_idx += 1
        a, b, lo, hi = boxes[piece_idx]
        if not (a < u < b) or lo == hi:
            continue
        fu = eval_at(f, u)
        # left-cut branch [u, b]: image hull of f(u) and the end value f(b)
        end_val = eval_at(f, b)
        img_lo, img_hi = (fu, end_val) if fu <= end_val else (end_val, fu)
        if img_lo <= u:
            add_box(k, k, bisect_left(pts, b), bisect_right(pts, img_hi) - 1)
        # right-cut branch [a, u] seen from the v side: v = u here
        start_val = eval_at(f, a)
        img_lo, img_hi = (fu, start_val) if fu <= start_val else (start_val, fu)
        if img_hi >= u:
            add_box(bisect_left(pts, img_lo), bisect_right(pts, a) - 1, k, k)
    counts = np.triu(grid.cumsum(axis=0).cumsum(axis=1)[:n, :n], k=1)  # need u < v
    best_d = int(counts.max())
    if best_d < 2:
        return 1, None
    i, j = np.unravel_index(int(counts.argmax()), counts.shape)
    cert = _branch_certificate(f, pts[i], pts[j], 1)
    assert cert.d == best_d, (cert.d, best_d)
    return best_d, cert


def _turning_positions(f: PLMap) -> list[Fraction]:
    xs, ys = f.breakpoints, f.values
    pts = [xs[0], xs[-1]]
    prev_sign = 0
    for i in range(len(xs) - 1):
        d = ys[i + 1] - ys[i]
        if d == 0:
            continue
        sign = 1 if d > 0 else -1
        if prev_sign != 0 and sign != prev_sign:
            pts.append(xs[i])
        prev_sign = sign
    return sorted(set(pts))


def entropy_lower_horseshoe(
    f: PLMap, depth: int, cap: int | None = None,
    lap_budget: int = HORSESHOE_LAP_BUDGET,
) -> tuple[float, HorseshoeCertificate | None]:
    """max over k <= depth of log(horseshoe_max(f^k)) / k with its certificate.

    Iterates whose lap count exceeds ``lap_budget`` are skipped (searching
    them is cubic in the piece count); skipping only weakens, never falsifies,
    the returned lower bound.  Depths whose lap-based ceiling cannot beat the
    current best are skipped as well.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    best = 0.0
    best_cert: HorseshoeCertificate | None = None
    for k, g in enumerate(_iterate_chain(f, depth, cap), start=1):
        laps = lap_count(g)
        if math.log(laps) / k <= best + 1e-12:
            continue
        if laps > lap_budget:
            continue
        d, cert = horseshoe_max(g)
        if d >= 2 and math.log(d) / k > best:
            best = math.log(d) / k
            best_cert = HorseshoeCertificate(d=d, intervals=cert.intervals, iterate=k)
    return best, best_cert


def _critical_partition(f: PLMap) -> list[Fraction]:
    return _turning_positions(f)


def entropy_lower_markov(f: PLMap, refinement: int,
                         partition_cap: int = PARTITION_CAP) -> float:
    """log of the spectral radius of the covering matrix on the refined partition.

    The partition starts at the critical points of f and is refined
    ``refinement`` times by pulling partition points back through f.  Each
    round's covering matrix (M[i][j] = 1 iff f(I_i) contains I_j) gives a
    valid entropy lower bound; the running maximum over rounds is returned,
    which makes the value non-decreasing in ``refinement``.
    """
    if refinement < 0:
        raise ValueError(f"refinement must be >= 0, got {refinement}")
    best, rounds_done = _markov_scan(f, refinement, partition_cap)
    if rounds_done <= refinement and rounds_done != refinement + 1:
        raise ResourceLimitError(
            f"covering partition exceeded {partition_cap} cells",
            achieved=rounds_done, cap=partition_cap)
    return best


def _markov_scan(f: PLMap, refinement: int,
                 partition_cap: int = PARTITION_CAP) -> tuple[float, int]:
    """Best covering-matrix bound over <= refinement+1 rounds; stops at the cap.

    Returns (best bound so far, number of completed rounds).
    """
    points = _critical_partition(f)
    if len(points) < 2:
        return 0.0, refinement + 1
    best = 0.0
    for round_no in range(refinement + 1):
        if len(points) - 1 > partition_cap:
            return best, round_no
        best = max(best, _covering_log_radius(f, points))
        if round_no < refinement:
            points = _refine_partition(f, points)
    return best, refinement + 1


def _refine_partition(f: PLMap, points: list[Fraction]) -> list[Fraction]:
    """points plus all f-preimages of points inside the partition hull."""
    lo, hi = points[0], points[-1]
    xs, ys = f.breakpoints, f.values
    new = set(points)
    targets = points
    for i in range(len(xs) - 1):
        if xs[i + 1] < lo or xs[i] > hi:
            continue
        y0, y1 = ys[i], ys[i + 1]
        if y0 == y1:
            continue
        seg_lo, seg_hi = (y0, y1) if y0 < y1 else (y1, y0)
        a = bisect_left(targets, seg_lo)
        b = bisect_right(targets, seg_hi)
        x0, x1 = xs[i], xs[i + 1]
        scale = (x1 - x0) / (y1 - y0)
        for t in targets[a:b]:
            x = x0 + (t - y0) * scale
            if lo <= x <= hi:
                new.add(x)
    return sorted(new)


def _covering_log_radius(f: PLMap, points: list[Fraction]) -> float:
    """Spectral radius of the covering matrix over the cells of ``points``.

    Partition points always include every critical point of f, so f is
    monotone on each cell and cell images are endpoint hulls.  Cells are
    sorted, hence each image covers a contiguous index window of cells;
    rows are stored as (start, stop) windows and the power iteration does
    its matvec with prefix sums.
    """
    n = len(points) - 1
    vals = eval_many(f, points)
    starts = np.empty(n, dtype=np.int64)
    stops = np.empty(n, dtype=np.int64)  # exclusive
    for i in range(n):
        lo, hi = (vals[i], vals[i + 1]) if vals[i] <= vals[i + 1] else (vals[i + 1], vals[i])
        jl = bisect_left(points, lo)
        jr = bisect_right(points, hi) - 1  # last point index <= hi
        starts[i] = jl
        stops[i] = max(jr, jl)
    radius = _interval_rows_radius(starts, stops)
    return math.log(radius) if radius > 1.0 else 0.0


def _interval_rows_radius(starts: np.ndarray, stops: np.ndarray) -> float:
    """Certified lower estimate of the spectral radius of an interval-row 0/1 matrix.

    Power iteration on M + I (the shift removes periodicity) produces an
    approximate Perron vector; the returned value is its Collatz-Wielandt
    floor min_i ((M+I)v)_i / v_i - 1, which is a true lower bound on the
    radius for any nonnegative test vector, so iteration inaccuracy can only
    weaken the bound, never falsify it.
    """
    n = len(starts)
    if n == 0 or not (stops > starts).any():
        return 0.0
    v = np.ones(n) / math.sqrt(n)
    prev = 0.0
    for _ in range(_POWER_ITERS):
        prefix = np.concatenate(([0.0], np.cumsum(v)))
        w = prefix[stops] - prefix[starts] + v
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        v = w / norm
        if abs(norm - prev) <= _POWER_TOL * max(1.0, norm):
            break
        prev = norm
    # restrict to the numerically relevant support before taking the floor
    v = np.where(v > v.max() * 1e-12, v, 0.0)
    prefix = np.concatenate(([0.0], np.cumsum(v)))
    w = prefix[stops] - prefix[starts] + v
    support = v > 0.0
    floor = float(np.min(w[support] / v[support]))
    return max(floor - 1.0, 0.0)


def validate_certificate(f: PLMap, cert: HorseshoeCertificate,
                         cap: int | None = None) -> bool:
    """Re-check a certificate exactly: disjoint interiors and full covering."""
    g = iterate(f, cert.iterate, cap=cap) if cert.iterate > 1 else f
    ivs = cert.intervals
    for i in range(len(ivs)):
        for j in range(i + 1, len(ivs)):
            if not ivs[i].interior_disjoint(ivs[j]):
                return False
    for src in ivs:
        img = image_interval(g, src)
        for dst in ivs:
            if not (img.lo <= dst.lo and dst.hi <= img.hi):
                return False
    return True


def entropy_bounds(f: PLMap, depth: int, cap: int | None = None,
                   lap_budget: int = HORSESHOE_LAP_BUDGET) -> EntropyBounds:
    """Certified bracket on the invariant restriction of f.

    Lower side is the better of the horseshoe search over iterates and the
    covering-matrix bound (refined up to ``depth`` rounds within the
    partition cap); upper side is the lap-growth bound.  Resource caps only
    reduce the achieved depth.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    g = invariant_restriction(f)
    if len(g) == 1 or g.domain.width == 0:
        return EntropyBounds(0.0, 0.0, None, depth_used=depth)

    chain = _iterate_chain(g, depth, cap)
    achieved = len(chain)

    upper = math.inf
    for k, gk in enumerate(chain, start=1):
        upper = min(upper, math.log(lap_count(gk)) / k)

    lower_h = 0.0
    cert: HorseshoeCertificate | None = None
    for k, gk in enumerate(chain, start=1):
        laps = lap_count(gk)
        if math.log(laps) / k <= lower_h + 1e-12 or laps > lap_budget:
            continue
        d, c = horseshoe_max(gk)
        if d >= 2 and math.log(d) / k > lower_h:
            lower_h = math.log(d) / k
            cert = HorseshoeCertificate(d=d, intervals=c.intervals, iterate=k)

    try:
        lower_m = entropy_lower_markov(g, depth)
    except ResourceLimitError:
        lower_m = 0.0

    if cert is not None and lower_h >= lower_m - 1e-15:
        lower = lower_h
    else:
        lower = lower_m
        cert = None
    lower = min(lower, upper)  # guard against float rounding at exact equality
    return EntropyBounds(lower, upper, cert, depth_used=achieved)
