"""Exact piecewise-linear function calculus over the rationals.

A :class:`PLMap` is a continuous piecewise-linear function given by strictly
increasing rational breakpoints and rational values.  Outside its domain the
function is extended by its boundary values, so every map here is a bounded
continuous function on the whole real line.  All operations are exact: two
maps agree as functions iff they evaluate equally on the union of their
breakpoints, and images/oscillations/norms are attained at breakpoints.

Everything is immutable and pure; values can be shared freely across
workers.
"""

from __future__ import annotations

import os
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import ConstructionError, DomainError, NumericError, ResourceLimitError
from .rational import q_from_float

#: default ceiling on breakpoints produced by a single composition
DEFAULT_BREAKPOINT_CAP = 2_000_000

_CAP_ENV = "ENTROPY_BANACH_CAP"


def breakpoint_cap(override: int | None = None) -> int:
    """Active breakpoint cap: explicit override, else env var, else default."""
    if override is not None:
        return override
    env = os.environ.get(_CAP_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConstructionError(f"{_CAP_ENV} must be an integer, got {env!r}")
    return DEFAULT_BREAKPOINT_CAP


@dataclass(frozen=True)
class IntervalQ:
    """Closed rational interval [lo, hi] (degenerate lo == hi allowed)."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ConstructionError(f"interval needs lo <= hi, got [{self.lo}, {self.hi}]")

    def contains(self, other: "IntervalQ") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def interior_disjoint(self, other: "IntervalQ") -> bool:
        return self.hi <= other.lo or other.hi <= self.lo

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


@dataclass(frozen=True)
class PLMap:
    """Piecewise-linear interpolant of ``values`` at ``breakpoints``.

    Evaluation left of the first breakpoint returns the first value,
    right of the last breakpoint the last value.  A single-node map is a
    constant function.
    """

    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        xs, ys = self.breakpoints, self.values
        if not xs:
            raise ConstructionError("a PL map needs at least one breakpoint")
        if len(xs) != len(ys):
            raise ConstructionError(
                f"breakpoints/values length mismatch: {len(xs)} vs {len(ys)}")
        if any(xs[i] >= xs[i + 1] for i in range(len(xs) - 1)):
            raise ConstructionError("breakpoints must be strictly increasing")

    @property
    def domain(self) -> IntervalQ:
        return IntervalQ(self.breakpoints[0], self.breakpoints[-1])

    def __call__(self, x) -> Fraction:
        return eval_at(self, Fraction(x))

    def __len__(self) -> int:
        return len(self.breakpoints)


def make_pl(breakpoints: Sequence, values: Sequence) -> PLMap:
    """Build the PL interpolant with constant extension outside the domain."""
    xs = tuple(Fraction(x) for x in breakpoints)
    ys = tuple(Fraction(y) for y in values)
    return PLMap(xs, ys)


def eval_at(f: PLMap, x: Fraction) -> Fraction:
    """Exact value of the extended function at ``x``."""
    xs, ys = f.breakpoints, f.values
    if x <= xs[0]:
        return ys[0]
    if x >= xs[-1]:
        return ys[-1]
    i = bisect_right(xs, x) - 1
    if xs[i] == x:
        return ys[i]
    x0, x1 = xs[i], xs[i + 1]
    y0, y1 = ys[i], ys[i + 1]
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def eval_many(f: PLMap, xs_sorted: Sequence[Fraction]) -> list[Fraction]:
    """Evaluate at an ascending sequence of points with a single merge scan."""
    xs, ys = f.breakpoints, f.values
    out: list[Fraction] = []
    i = 0
    last = len(xs) - 1
    for x in xs_sorted:
        while i < last and xs[i + 1] <= x:
            i += 1
        if x <= xs[0]:
            out.append(ys[0])
        elif x >= xs[-1]:
            out.append(ys[-1])
        elif xs[i] == x:
            out.append(ys[i])
        else:
            x0, x1 = xs[i], xs[i + 1]
            y0, y1 = ys[i], ys[i + 1]
            out.append(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    return out


def _prune_collinear(xs: list[Fraction], ys: list[Fraction]) -> tuple[tuple, tuple]:
    """Drop interior nodes where the two adjacent segments share a slope.

    Purely a representation normalization: the function is unchanged, and all
    kinks (turning points, slope changes) are preserved.
    """
    if len(xs) <= 2:
        return tuple(xs), tuple(ys)
    keep_x = [xs[0]]
    keep_y = [ys[0]]
    for i in range(1, len(xs) - 1):
        # cross-multiplied slope comparison avoids building new Fractions
        lhs = (ys[i] - keep_y[-1]) * (xs[i + 1] - xs[i])
        rhs = (ys[i + 1] - ys[i]) * (xs[i] - keep_x[-1])
        if lhs != rhs:
            keep_x.append(xs[i])
            keep_y.append(ys[i])
    keep_x.append(xs[-1])
    keep_y.append(ys[-1])
    return tuple(keep_x), tuple(keep_y)


def compose(f: PLMap, g: PLMap, cap: int | None = None) -> PLMap:
    """Exact PL representation of x -> f(g(x)).

    Breakpoint candidates are g's own breakpoints plus the preimages under g
    of f's breakpoints; collinear interior nodes are pruned afterwards.
    Raises :class:`ResourceLimitError` when the candidate count exceeds the
    breakpoint cap.
    """
    limit = breakpoint_cap(cap)
    gx, gy = g.breakpoints, g.values
    f_nodes = f.breakpoints

    candidates: list[Fraction] = list(gx)
    for i in range(len(gx) - 1):
        y0, y1 = gy[i], gy[i + 1]
        if y0 == y1:
            continue
        lo, hi = (y0, y1) if y0 < y1 else (y1, y0)
        # f-breakpoints strictly inside the value range of this segment
        a = bisect_right(f_nodes, lo)
        b = bisect_left(f_nodes, hi)
        if a >= b:
            continue
        x0, x1 = gx[i], gx[i + 1]
        scale = (x1 - x0) / (y1 - y0)
        for j in range(a, b):
            candidates.append(x0 + (f_nodes[j] - y0) * scale)
        if len(candidates) > limit:
            raise ResourceLimitError(
                f"composition would need more than {limit} breakpoints",
                needed=len(candidates), cap=limit)
    candidates.sort()
    merged_x: list[Fraction] = []
    for x in candidates:
        if not merged_x or x != merged_x[-1]:
            merged_x.append(x)
    inner = eval_many(g, merged_x)
    outer = [eval_at(f, v) for v in inner]
    xs, ys = _prune_collinear(merged_x, outer)
    return PLMap(xs, ys)


def lap_count(f: PLMap) -> int:
    """Number of maximal monotonicity intervals on the domain.

    Constant runs merge into an adjacent lap; an entirely constant map
    counts as one lap.
    """
    xs, ys = f.breakpoints, f.values
    signs = []
    for i in range(len(xs) - 1):
        d = ys[i + 1] - ys[i]
        if d != 0:
            signs.append(1 if d > 0 else -1)
    if not signs:
        return 1
    laps = 1
    for a, b in zip(signs, signs[1:]):
        if a != b:
            laps += 1
    return laps


def crop(f: PLMap, a, b) -> PLMap:
    """Freeze f at its values on [a, b]: constant f(a) left, f(b) right."""
    a, b = Fraction(a), Fraction(b)
    if a >= b:
        raise DomainError(f"crop needs a < b, got [{a}, {b}]")
    xs, ys = f.breakpoints, f.values
    lo = bisect_right(xs, a)
    hi = bisect_left(xs, b)
    new_x = [a] + list(xs[lo:hi]) + [b]
    new_y = [eval_at(f, a)] + list(ys[lo:hi]) + [eval_at(f, b)]
    return PLMap(tuple(new_x), tuple(new_y))


def linear_combination(coeffs: Sequence, fs: Sequence[PLMap]) -> PLMap:
    """Exact PL map of sum(a_i * f_i) on the union of breakpoint sets."""
    if not fs or len(coeffs) != len(fs):
        raise ConstructionError("need equally many coefficients and maps, at least one")
    cs = [Fraction(c) for c in coeffs]
    all_x = sorted(set().union(*(f.breakpoints for f in fs)))
    totals = [Fraction(0)] * len(all_x)
    for c, f in zip(cs, fs):
        if c == 0:
            continue
        vals = eval_many(f, all_x)
        for i, v in enumerate(vals):
            totals[i] += c * v
    xs, ys = _prune_collinear(all_x, totals)
    return PLMap(xs, ys)


def scale(f: PLMap, c) -> PLMap:
    """c * f, keeping the breakpoint set."""
    c = Fraction(c)
    return PLMap(f.breakpoints, tuple(c * y for y in f.values))


def image_interval(f: PLMap, J: IntervalQ) -> IntervalQ:
    """Exact [min, max] of f over J (attained at breakpoints in J or at its ends)."""
    xs = f.breakpoints
    vals = [eval_at(f, J.lo), eval_at(f, J.hi)]
    a = bisect_right(xs, J.lo)
    b = bisect_left(xs, J.hi)
    vals.extend(f.values[a:b])
    return IntervalQ(min(vals), max(vals))


def oscillation(f: PLMap, J: IntervalQ) -> Fraction:
    """sup over x, y in J of |f(x) - f(y)|."""
    img = image_interval(f, J)
    return img.hi - img.lo


def sup_norm(f: PLMap) -> Fraction:
    """max |f|, attained at a breakpoint."""
    return max(abs(y) for y in f.values)


def even_extension(f: PLMap) -> PLMap:
    """Reflect a map on [0, b] to the even map on [-b, b]."""
    xs, ys = f.breakpoints, f.values
    if xs[0] != 0:
        raise DomainError(f"even extension needs a domain starting at 0, got {xs[0]}")
    new_x = [-x for x in reversed(xs)] + list(xs[1:])
    new_y = list(reversed(ys)) + list(ys[1:])
    if len(new_x) == 1:
        return PLMap((xs[0],), (ys[0],))
    return PLMap(tuple(new_x), tuple(new_y))


def sample_pl(h: Callable[[float], float], domain: IntervalQ, n: int) -> PLMap:
    """PL interpolant of ``h`` at ``n`` equispaced rational nodes.

    Sample values are converted to exact rationals (binary-exact floats);
    the caller owns the approximation error of the surrogate.
    """
    if n < 2:
        raise DomainError(f"need at least 2 sample nodes, got {n}")
    if domain.lo >= domain.hi:
        raise DomainError("sampling needs a nondegenerate domain")
    step = (domain.hi - domain.lo) / (n - 1)
    xs = [domain.lo + k * step for k in range(n)]
    ys = []
    for x in xs:
        v = h(float(x))
        try:
            ys.append(q_from_float(v))
        except ConstructionError as exc:
            raise NumericError(f"sample at x={x} is not finite: {v!r}") from exc
    return PLMap(tuple(xs), tuple(ys))


def pl_equal(f: PLMap, g: PLMap) -> bool:
    """True iff f and g agree as functions on all of R."""
    probe = sorted(set(f.breakpoints) | set(g.breakpoints))
    fs = eval_many(f, probe)
    gs = eval_many(g, probe)
    return fs == gs
