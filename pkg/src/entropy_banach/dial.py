"""A one-parameter function whose nonzero multiples all share one entropy value.

Three ingredients:

* a family theta_a = (1-a) id + a T_d interpolating between the identity and
  a full d-branch horseshoe on [9, 10] (identity off that interval, carrier
  [0, 12]); its entropy under scalar multiples vanishes for multipliers
  outside [9/10, 10/9], so r(a) = sup over multipliers of the entropy is a
  continuous dial from 0 up to log d, and a bisection finds a* with
  r(a*) = t;

* an enumeration of the positive rationals (Calkin-Wilf order with doubling
  bridges) in which consecutive terms never more than double;

* the multiscale assembly: scale n carries lambda_n times a copy of
  theta_{a*} compressed into I_n = [0.9 * 4^-n, 4^-n], glued monotonically,
  fixed at 10 from 10 on, and extended evenly.  For any multiplier lambda
  the scales with lambda * lambda_n inside the active window reproduce the
  dialed entropy; all other scales report certified near-zero brackets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .entropy import EntropyBounds, entropy_bounds
from .errors import ConfigurationError, ConstructionError, DomainError
from .plmap import PLMap, eval_at, even_extension, linear_combination, make_pl, scale

WINDOW_LO = Fraction(9, 10)
WINDOW_HI = Fraction(10, 9)

#: default iterate depth for out-of-window scale diagnostics (their lap
#: counts grow linearly, so deep iterates are cheap and push the bound down)
VANISH_DEPTH = 32

_GOLDEN_ITERS = 8
_BISECTION_MAX = 40


def full_horseshoe_map(d: int) -> PLMap:
    """d full branches on [9, 10], identity elsewhere on [0, 12]."""
    if d < 3 or d % 2 == 0:
        raise DomainError(f"need an odd branch count >= 3, got {d}")
    xs = [Fraction(0), Fraction(9)]
    ys = [Fraction(0), Fraction(9)]
    for k in range(1, d + 1):
        xs.append(Fraction(9) + Fraction(k, d))
        ys.append(Fraction(10) if k % 2 == 1 else Fraction(9))
    xs.append(Fraction(12))
    ys.append(Fraction(12))
    return make_pl(xs, ys)


@lru_cache(maxsize=512)
def theta(a, d: int) -> PLMap:
    """(1 - a) id + a T_d: identity off (9, 10), a-fraction of the horseshoe on it.

    Odd d keeps both endpoints of [9, 10] fixed, which is what makes the
    combination continuous with the identity outside.
    """
    a = Fraction(a)
    if not 0 <= a <= 1:
        raise DomainError(f"need 0 <= a <= 1, got {a}")
    ident = make_pl([0, 12], [0, 12])
    return linear_combination([1 - a, a], [ident, full_horseshoe_map(d)])


@dataclass(frozen=True)
class DialConfig:
    """Parameters of the dial construction."""

    t: float
    d: int = 3
    a_star: Fraction | None = None
    truncation: int = 12
    lambda_grid_size: int = 101
    entropy_depth: int = 8
    tolerance: float = 1e-2

    def __post_init__(self):
        if self.d < 3 or self.d % 2 == 0:
            raise ConfigurationError(f"d must be odd and >= 3, got {self.d}")
        if not 0 < self.t < math.log(self.d):
            raise ConfigurationError(
                f"t must lie in (0, log {self.d} = {math.log(self.d):.4f}), got {self.t}")
        if self.truncation < 1 or self.lambda_grid_size < 3 or self.entropy_depth < 1:
            raise ConfigurationError("truncation, grid size and depth must be positive")
        if self.tolerance <= 0:
            raise ConfigurationError("tolerance must be positive")


@dataclass(frozen=True)
class REstimate:
    """Entropy-dial estimate r(a): best bracket midpoint over the multiplier grid."""

    value: float
    bracket_width: float
    argmax: Fraction
    warning: bool


@lru_cache(maxsize=8192)
def _scale_bounds(a: Fraction, lam: Fraction, d: int, depth: int) -> EntropyBounds:
    return entropy_bounds(scale(theta(a, d), lam), depth)


def _multiplier_grid(size: int) -> list[Fraction]:
    step = (WINDOW_HI - WINDOW_LO) / (size - 1)
    grid = {WINDOW_LO + k * step for k in range(size)}
    grid.add(Fraction(1))  # the only multiplier with no orbit escape
    return sorted(grid)


def r_of_a(a, cfg: DialConfig) -> REstimate:
    """max over the multiplier window of the entropy-bracket midpoint.

    The grid always contains 1; a short golden-section refinement around the
    grid argmax polishes the estimate.  The certified bracket width at the
    argmax is reported as the estimate's uncertainty, with a warning flag
    when it exceeds the configured tolerance.
    """
    a = Fraction(a)
    best_val = -math.inf
    best_width = 0.0
    best_lam = Fraction(1)
    for lam in _multiplier_grid(cfg.lambda_grid_size):
        eb = _scale_bounds(a, lam, cfg.d, cfg.entropy_depth)
        if eb.midpoint > best_val:
            best_val, best_width, best_lam = eb.midpoint, eb.width, lam
    lo = max(float(best_lam) - 0.05, float(WINDOW_LO))
    hi = min(float(best_lam) + 0.05, float(WINDOW_HI))
    phi = (math.sqrt(5) - 1) / 2
    x1 = hi - phi * (hi - lo)
    x2 = lo + phi * (hi - lo)

    def probe(x: float) -> tuple[float, float, Fraction]:
        lam = Fraction(x).limit_denominator(720)
        eb = _scale_bounds(a, lam, cfg.d, cfg.entropy_depth)
        return eb.midpoint, eb.width, lam

    f1, f2 = probe(x1), probe(x2)
    for _ in range(_GOLDEN_ITERS):
        if f1[0] >= f2[0]:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - phi * (hi - lo)
            f1 = probe(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + phi * (hi - lo)
            f2 = probe(x2)
    for cand in (f1, f2):
        if cand[0] > best_val:
            best_val, best_width, best_lam = cand
    return REstimate(value=best_val, bracket_width=best_width,
                     argmax=best_lam, warning=best_width > cfg.tolerance)


def find_a_star(t: float, cfg: DialConfig) -> Fraction:
    """Bisection on a for r(a) = t, using the bracket-midpoint estimator.

    Stops as soon as the residual drops below the tolerance, or once the
    bisection gap falls below the certification resolution (then the best
    candidate wins if it meets the tolerance).
    """
    if not 0 < t < math.log(cfg.d):
        raise ConfigurationError(
            f"t must lie strictly between 0 and log {cfg.d}, got {t}")
    lo, hi = Fraction(0), Fraction(1)
    r_lo = r_of_a(lo, cfg)
    r_hi = r_of_a(hi, cfg)
    if not r_lo.value < t < r_hi.value:
        raise ConfigurationError(
            f"r does not bracket t at the endpoints: r(0)={r_lo.value:.4f}, "
            f"r(1)={r_hi.value:.4f}, t={t:.4f}")
    best_a, best_res = lo, abs(r_lo.value - t)
    if abs(r_hi.value - t) < best_res:
        best_a, best_res = hi, abs(r_hi.value - t)
    gap_floor = Fraction(1, 1 << 24)
    for _ in range(_BISECTION_MAX):
        mid = (lo + hi) / 2
        est = r_of_a(mid, cfg)
        res = abs(est.value - t)
        if res < best_res:
            best_a, best_res = mid, res
        if res <= cfg.tolerance:
            return mid
        if hi - lo < gap_floor:
            break  # below the estimator's resolution; stop chasing noise
        if est.value < t:
            lo = mid
        else:
            hi = mid
    if best_res <= cfg.tolerance:
        return best_a
    raise ConfigurationError(
        f"bisection stalled with residual {best_res:.4f} > tolerance {cfg.tolerance}")


# --- rational enumeration ---------------------------------------------------------

@dataclass(frozen=True)
class LambdaEnumeration:
    """Positive rationals, first term 1, consecutive terms at most doubling."""

    terms: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.terms or self.terms[0] != 1:
            raise ConstructionError("enumeration must start at 1")
        if any(t <= 0 for t in self.terms):
            raise ConstructionError("enumeration terms must be positive")
        for a, b in zip(self.terms, self.terms[1:]):
            if b > 2 * a:
                raise ConstructionError(f"ratio violation: {b} > 2 * {a}")


def calkin_wilf(count: int) -> list[Fraction]:
    """First ``count`` terms of the Calkin-Wilf order on the positive rationals."""
    out = [Fraction(1)]
    q = Fraction(1)
    for _ in range(count - 1):
        q = 1 / (2 * (q.numerator // q.denominator) + 1 - q)
        out.append(q)
    return out


def rational_enumeration(count: int) -> LambdaEnumeration:
    """Calkin-Wilf order with doubling bridges keeping every up-step <= 2x.

    Whenever the next target more than doubles the current value, powers of
    two times the current value are inserted first.  Down-steps are free, so
    only upward jumps need bridging; repetitions are harmless.
    """
    if count < 1:
        raise DomainError(f"need count >= 1, got {count}")
    terms = [Fraction(1)]
    current = Fraction(1)
    cw = Fraction(1)
    while len(terms) < count:
        cw = 1 / (2 * (cw.numerator // cw.denominator) + 1 - cw)
        while cw > 2 * current and len(terms) < count:
            current *= 2
            terms.append(current)
        if len(terms) < count:
            terms.append(cw)
            current = cw
    return LambdaEnumeration(terms=tuple(terms[:count]))


# --- the assembled dial map ---------------------------------------------------------

def build_dial_map(cfg: DialConfig) -> PLMap:
    """The even multiscale map on [-10, 10] built from theta_{a*}.

    Scale n (1-based) carries lambda_n * (x_n / 10) * theta(10 x / x_n) on
    I_n = [0.9 x_n, x_n] with x_n = 4^-n; gaps interpolate linearly; below
    the last scale the map descends linearly to the fixed origin; from 10 on
    it is the constant 10.
    """
    if cfg.a_star is None:
        raise ConfigurationError("a_star must be set before building the map")
    if cfg.truncation < 1:
        raise ConfigurationError("need at least one scale")
    th = theta(cfg.a_star, cfg.d)
    lambdas = rational_enumeration(cfg.truncation).terms
    inner = [(x, y) for x, y in zip(th.breakpoints, th.values) if 9 <= x <= 10]

    xs = [Fraction(0)]
    ys = [Fraction(0)]
    for n in range(cfg.truncation, 0, -1):
        x_n = Fraction(1, 4) ** n
        lam_n = lambdas[n - 1]
        for u, v in inner:
            xs.append(x_n * u / 10)
            ys.append(lam_n * x_n * v / 10)
    xs.append(Fraction(10))
    ys.append(Fraction(10))
    return even_extension(make_pl(xs, ys))


@dataclass(frozen=True)
class ScaleRecord:
    """Per-scale diagnostics for one multiplier lambda."""

    n: int
    lambda_n: Fraction
    multiplier: Fraction
    in_window: bool
    diagonal_crossing: bool
    bounds: EntropyBounds


@dataclass(frozen=True)
class DialCheckRecord:
    """dial_entropy_check output for one multiplier."""

    lam: Fraction
    scales: tuple[ScaleRecord, ...]
    achieved: EntropyBounds | None
    lambda_star: Fraction
    nearest_multiplier: Fraction | None
    tendency_lower: float


def _diagonal_crossing(lam: Fraction, lam_n: Fraction, n: int) -> bool:
    """Does the box I_n x (lam f)(I_n) meet the diagonal?"""
    x_n = Fraction(1, 4) ** n
    mu = lam * lam_n
    lo, hi = Fraction(9, 10) * x_n, x_n
    return mu * lo <= hi and mu * hi >= lo


def dial_entropy_check(cfg: DialConfig, lambdas: Sequence,
                       vanish_depth: int = VANISH_DEPTH,
                       density_terms: int = 1024) -> list[DialCheckRecord]:
    """Per-multiplier entropy reports across the scales of the dial map.

    For each lambda, every scale n <= truncation is scored through the exact
    conjugacy of the dial map on I_n to (lambda lambda_n) theta: scales with
    the product in the active window get the configured-depth bracket and
    their max is the achieved bracket; scales outside get a deeper, cheap
    bracket that certifies vanishing entropy.  The density record reports how
    close the extended enumeration can bring some multiplier to the window
    argmax (the refinement that drives the construction toward t as the
    enumeration grows), with its certified lower bound.
    """
    if cfg.a_star is None:
        raise ConfigurationError("a_star must be set before checking entropies")
    terms = rational_enumeration(cfg.truncation).terms
    records = []
    for raw in lambdas:
        lam = Fraction(raw)
        if lam == 0:
            raise DomainError("the zero multiplier has no scale analysis")
        # the map is even, so the dynamics of a negative multiple is conjugate
        # (via x -> -x) to that of its absolute value: identical bounds
        lam_abs = abs(lam)
        scales = []
        achieved: EntropyBounds | None = None
        for n in range(1, cfg.truncation + 1):
            mu = lam_abs * terms[n - 1]
            in_window = WINDOW_LO <= mu <= WINDOW_HI
            depth = cfg.entropy_depth if in_window else vanish_depth
            eb = _scale_bounds(Fraction(cfg.a_star), mu, cfg.d, depth)
            scales.append(ScaleRecord(
                n=n, lambda_n=terms[n - 1], multiplier=mu, in_window=in_window,
                diagonal_crossing=_diagonal_crossing(lam_abs, terms[n - 1], n),
                bounds=eb))
            if in_window and (achieved is None or eb.midpoint > achieved.midpoint):
                achieved = eb
        est = r_of_a(cfg.a_star, cfg)
        dense = rational_enumeration(max(density_terms, cfg.truncation)).terms
        nearest = min(
            (lam_abs * term for term in dense
             if WINDOW_LO <= lam_abs * term <= WINDOW_HI),
            key=lambda mu: abs(mu - est.argmax),
            default=None)
        tendency = 0.0 if nearest is None else _scale_bounds(
            Fraction(cfg.a_star), nearest, cfg.d, cfg.entropy_depth).lower
        records.append(DialCheckRecord(
            lam=lam, scales=tuple(scales), achieved=achieved,
            lambda_star=est.argmax, nearest_multiplier=nearest,
            tendency_lower=tendency))
    return records


def with_a_star(cfg: DialConfig, a_star: Fraction) -> DialConfig:
    return replace(cfg, a_star=a_star)


def orbit_itinerary(f: PLMap, lam, x0, steps: int = 64,
                    truncation: int = 12) -> list[int | None]:
    """Scale indices visited by the orbit of x0 under lam * f (diagnostic only).

    Entry k is the index n with |x_k| in I_n = [0.9 * 4^-n, 4^-n], or None
    when the iterate sits between scales.  The construction predicts that
    orbits visit finitely many scales and at most one of them infinitely
    often; this helper reports what actually happens on the truncated map,
    it does not prove the claim.
    """
    lam = Fraction(lam)
    x = Fraction(x0)
    out: list[int | None] = []
    for _ in range(steps):
        x = lam * eval_at(f, x)
        ax = abs(x)
        found = None
        for n in range(1, truncation + 1):
            x_n = Fraction(1, 4) ** n
            if Fraction(9, 10) * x_n <= ax <= x_n:
                found = n
                break
        out.append(found)
    return out
