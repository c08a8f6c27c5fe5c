"""Tests for the multiscale isometric embedding."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entropy_banach.entropy import validate_certificate
from entropy_banach.errors import ConstructionError, DomainError, TruncationError
from entropy_banach.plmap import (
    eval_at,
    linear_combination,
    make_pl,
    pl_equal,
    sup_norm,
)
from entropy_banach.universal import (
    geometric_schedule,
    geometry,
    hoelder_schedule,
    holder_quotient,
    psi,
    psi_horseshoe,
)

TENT = make_pl([0, F(1, 2), 1], [0, 1, 0])
GEO = geometric_schedule(F(2, 3), 8)


@st.composite
def unit_pl_maps(draw):
    k = draw(st.integers(min_value=0, max_value=4))
    interior = sorted(draw(st.sets(
        st.fractions(min_value=F(1, 16), max_value=F(15, 16), max_denominator=16),
        min_size=k, max_size=k)))
    xs = [F(0)] + interior + [F(1)]
    ys = draw(st.lists(
        st.fractions(min_value=-3, max_value=3, max_denominator=12),
        min_size=len(xs), max_size=len(xs)))
    return make_pl(xs, ys)


# --- schedules ------------------------------------------------------------------

def test_geometric_schedule_invariants():
    s = geometric_schedule(F(2, 3), 10)
    assert s.q[0] == 1
    for n in range(10):
        assert s.q[n + 1] < s.q[n]
        assert s.q[n + 1] / s.p[n + 1] > s.q[n] / s.p[n]
        assert s.q[n] >= s.p[n]


def test_geometric_schedule_ratio_range():
    with pytest.raises(ConstructionError):
        geometric_schedule(F(1, 2), 4)
    with pytest.raises(ConstructionError):
        geometric_schedule(F(1), 4)


def test_hoelder_schedule_invariants():
    s = hoelder_schedule(F(1, 2), 12)
    assert s.q[0] == 1
    for n in range(12):
        assert s.q[n + 1] < s.q[n]
        assert s.q[n] >= s.p[n]
        assert s.q[n + 1] / s.p[n + 1] > s.q[n] / s.p[n]


def test_geometry_adjacency():
    geo = geometry(GEO)
    for n in range(8):
        assert geo.windows[n].lo == geo.windows[n + 1].hi
        assert geo.windows[n].lo < geo.inner[n].lo
        assert geo.inner[n].hi < geo.windows[n].hi


# --- the embedding ---------------------------------------------------------------

def test_psi_zero_map():
    z = make_pl([0, 1], [0, 0])
    assert sup_norm(psi(z, GEO)) == 0


def test_psi_isometry_tent():
    assert sup_norm(psi(TENT, GEO)) == sup_norm(TENT)


def test_psi_figure_profile():
    s = geometric_schedule(F(2, 3), 6)
    g = psi(TENT, s)
    # copy n has amplitude (2/3)^n at the midpoint of its carrier interval
    for n in range(7):
        p = F(1, 2) ** n
        peak_x = p * (F(1, 2) / 2 + F(3, 4))  # image of the tent's apex
        assert eval_at(g, peak_x) == F(2, 3) ** n
        assert eval_at(g, F(2, 3) * p) == 0
        assert eval_at(g, F(4, 3) * p) == 0


def test_psi_even_and_zero_tail():
    g = psi(TENT, GEO)
    for x in g.breakpoints:
        assert eval_at(g, -x) == eval_at(g, x)
    assert eval_at(g, F(4, 3)) == 0
    assert eval_at(g, F(10)) == 0
    core = F(2, 3) * GEO.p[GEO.truncation]
    assert eval_at(g, core / 2) == 0


def test_psi_rejects_wrong_domain():
    with pytest.raises(DomainError):
        psi(make_pl([0, 2], [0, 1]), GEO)


@settings(max_examples=30, deadline=None)
@given(unit_pl_maps())
def test_psi_isometry_random(f):
    assert sup_norm(psi(f, GEO)) == sup_norm(f)


@settings(max_examples=20, deadline=None)
@given(unit_pl_maps(), unit_pl_maps(),
       st.fractions(min_value=-2, max_value=2, max_denominator=8),
       st.fractions(min_value=-2, max_value=2, max_denominator=8))
def test_psi_linearity_random(f, g, a, b):
    sched = GEO
    lhs = psi(linear_combination([a, b], [f, g]), sched)
    rhs = linear_combination([a, b], [psi(f, sched), psi(g, sched)])
    assert pl_equal(lhs, rhs)


# --- horseshoes of embedded maps ------------------------------------------------------

def test_psi_horseshoe_minimal_level():
    # amplitude/scale ratio (4/3)^n must beat 2^d; for the tent and d = 3
    # the first admissible level is 8
    sched = geometric_schedule(F(2, 3), 16)
    cert = psi_horseshoe(TENT, sched, 3)
    top = max(iv.hi for iv in cert.intervals)
    assert top == F(4, 3) * F(1, 2) ** 6  # windows 6, 7, 8
    assert validate_certificate(psi(TENT, sched), cert)


def test_psi_horseshoe_truncation_error():
    with pytest.raises(TruncationError) as err:
        psi_horseshoe(TENT, geometric_schedule(F(2, 3), 4), 3)
    assert err.value.minimal_n == 8


def test_psi_horseshoe_zero_map_rejected():
    with pytest.raises(DomainError):
        psi_horseshoe(make_pl([0, 1], [0, 0]), GEO, 2)


def test_psi_horseshoe_negative_side():
    flipped = make_pl([0, F(1, 2), 1], [0, -1, 0])
    sched = geometric_schedule(F(2, 3), 10)
    cert = psi_horseshoe(flipped, sched, 2)
    assert all(iv.hi <= 0 for iv in cert.intervals)
    assert validate_certificate(psi(flipped, sched), cert)


# --- hoelder quotients -------------------------------------------------------------------

def test_holder_quotient_constant():
    c = make_pl([0, 1], [2, 2])
    assert holder_quotient(c, 0.5, [F(0), F(1)]) == 0.0


def test_holder_quotient_identity():
    ident = make_pl([0, 1], [0, 1])
    q = holder_quotient(ident, 0.5, [F(0), F(1, 4), F(1)])
    # distance-1 pair gives 1; the 1/4 pair gives (1/4) / (1/2) = 1/2
    assert q == pytest.approx(1.0)


def test_holder_quotient_stabilizes_across_truncations():
    q10 = holder_quotient(psi(TENT, hoelder_schedule(F(1, 2), 10)), 0.5, [F(0)])
    q14 = holder_quotient(psi(TENT, hoelder_schedule(F(1, 2), 14)), 0.5, [F(0)])
    assert q14 <= q10 * 1.05 + 1e-9


def test_psi_horseshoe_succeeds_at_reported_minimum():
    with pytest.raises(TruncationError) as err:
        psi_horseshoe(TENT, geometric_schedule(F(2, 3), 4), 3)
    needed = err.value.minimal_n
    sched = geometric_schedule(F(2, 3), needed)
    cert = psi_horseshoe(TENT, sched, 3)
    assert validate_certificate(psi(TENT, sched), cert)
