import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greenlab.cli import parse_config
from greenlab.spiral import (NonSymbolicT, NotFound, Overflow, PlaneSystem, SpiralParams, WindowTooCoarse,
                             ZeroPoint, ec_search, green_member, lift_fiber_roots, projection_scan,
                             relation_ledger, spiral_point)

ONE = SpiralParams.make(1)
CIRCLE = PlaneSystem.circle(3, 1)


def system(*eqs, gt=()):
    body = "; ".join([f"eq {e}" for e in eqs] + [f"gt {g}" for g in gt])
    return parse_config("system V { " + body + " }").systems["V"]


def circle_f(t, s):
    """Hand evaluation of (x - 3)^2 + y^2 - 1 on the beta = 1 spiral."""
    r = math.exp(t + s)
    return (r * math.cos(t) - 3) ** 2 + (r * math.sin(t)) ** 2 - 1


def bisect(f, a, b, steps=200):
    fa = f(a)
    for _ in range(steps):
        m = (a + b) / 2
        fm = f(m)
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
    return (a + b) / 2


# ---------------------------------------------------------------------------
# spiral points
# ---------------------------------------------------------------------------

def test_spiral_point_examples():
    assert spiral_point(ONE, 0, 0) == (1.0, 0.0)
    assert spiral_point(SpiralParams.make(7), 0, 1) == pytest.approx((math.e, 0.0))
    x, y = spiral_point(ONE, math.pi, -math.pi)
    assert x == pytest.approx(-1.0) and y == pytest.approx(0.0, abs=1e-15)


def test_spiral_point_overflow():
    with pytest.raises(Overflow):
        spiral_point(ONE, 500, 300)


def test_beta_must_be_nonzero():
    with pytest.raises(ValueError):
        SpiralParams.make(0)
    with pytest.raises(ValueError):
        SpiralParams(1.0, ())


@settings(max_examples=200, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-3, 3), st.floats(-3, 3),
       st.sampled_from([1.0, 0.5, 2 * math.pi, -3.0]))
def test_group_law(t1, t2, s1, s2, beta):
    p = SpiralParams.make(beta)
    a = complex(*spiral_point(p, t1, s1))
    b = complex(*spiral_point(p, t2, s2))
    c = complex(*spiral_point(p, t1 + t2, s1 + s2))
    assert abs(c - a * b) <= 1e-12 * abs(c) * (1 + abs(beta * (t1 + t2)))


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------

def test_member_on_real_axis():
    for beta in (1, 2.5, -1):
        m = green_member(SpiralParams.make(beta), (math.e, 0.0))
        assert m.member and m.k == 0 and m.t == 0 and m.s_coords == (Fraction(1),)


def test_two_is_not_a_member_for_beta_two_pi():
    # t_k = k and s_k = ln 2 - k, never rational with small denominators
    p = SpiralParams.make(2 * math.pi, denom_bound=50)
    m = green_member(p, (2.0, 0.0))
    assert not m.member
    assert m.bounds["denom_bound"] == 50
    # independent check of the same claim with Fraction approximation
    for k in range(-50, 51):
        c = Fraction(math.log(2) - k).limit_denominator(50)
        assert abs(float(c) - (math.log(2) - k)) > 1e-9


def test_zero_point():
    with pytest.raises(ZeroPoint):
        green_member(ONE, (0.0, 0.0))


@settings(max_examples=100, deadline=None)
@given(st.floats(-10, 10), st.integers(-48, 48), st.integers(1, 16), st.sampled_from([1.0, 0.5, -3.0, 2.25]))
def test_round_trip(t, num, den, beta):
    s = Fraction(num, den)
    p = SpiralParams.make(beta)
    m = green_member(p, spiral_point(p, t, float(s)))
    assert m.member
    assert m.s_coords == (s,)
    assert m.t == pytest.approx(t, abs=1e-9)


def test_round_trip_two_constants():
    p = SpiralParams.make(1, [(1, "1"), (1, "ln2")])
    s = Fraction(1, 2) + 3 * math.log(2)
    m = green_member(p, spiral_point(p, 0.75, s))
    assert m.member and m.s_coords == (Fraction(1, 2), Fraction(3))
    assert m.t == pytest.approx(0.75, abs=1e-9)


# ---------------------------------------------------------------------------
# fibers and scans
# ---------------------------------------------------------------------------

def test_circle_fiber_bracket():
    assert circle_f(0, 0.7) == pytest.approx(-0.02732, abs=1e-5)
    assert circle_f(-0.1, 0.7) > 0
    fr = lift_fiber_roots(ONE, CIRCLE, 0.7)
    assert fr.count == 1
    t = fr.roots[0]
    assert -0.1 < t < 0
    assert t == pytest.approx(bisect(lambda u: circle_f(u, 0.7), -0.1, 0.0), abs=1e-12)
    assert fr.residuals[0] <= 1e-9


def test_circle_fiber_empty_for_large_s():
    assert lift_fiber_roots(ONE, CIRCLE, 10, (-1, 1)).count == 0


def test_line_through_identity():
    fr = lift_fiber_roots(ONE, system("x1 - 1"), 0, (-0.1, 0.1))
    assert fr.roots == [pytest.approx(0.0, abs=1e-12)]


def test_window_errors():
    with pytest.raises(WindowTooCoarse):
        lift_fiber_roots(ONE, CIRCLE, 0.7, (0, 0))
    with pytest.raises(WindowTooCoarse):
        lift_fiber_roots(ONE, CIRCLE, 0.7, (-0.1, 0), grid=1)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 2), st.sampled_from([50, 100, 200]))
def test_grid_doubling_keeps_roots(s, grid):
    coarse = lift_fiber_roots(ONE, CIRCLE, s, (-1, 1), grid).roots
    fine = lift_fiber_roots(ONE, CIRCLE, s, (-1, 1), 2 * grid).roots
    for r in coarse:
        assert any(abs(r - u) <= 1e-9 for u in fine)


def test_projection_scan_contains_interval():
    scan = projection_scan(ONE, CIRCLE, (0, 2), 200)
    hit = [iv for iv in scan.intervals if iv[0] <= 0.7 <= iv[1]]
    assert hit and hit[0][1] - hit[0][0] >= 0.05
    # independent: the fiber is nonempty exactly when the hand-evaluated f changes sign on the grid
    for s, n in scan.hits[::20]:
        ts = [-0.1 + 0.1 * j / 200 for j in range(201)]
        vals = [circle_f(u, s) for u in ts]
        changes = sum(1 for a, b in zip(vals, vals[1:]) if (a < 0) != (b < 0) or b == 0)
        assert (n > 0) == (changes > 0)


def test_projection_scan_empty_cases():
    assert projection_scan(ONE, CIRCLE, (10, 11), 20).intervals == []
    assert projection_scan(ONE, system("x1^2 + y1^2"), (0, 2), 40).intervals == []


# ---------------------------------------------------------------------------
# EC search
# ---------------------------------------------------------------------------

def test_ec_circle_certificate():
    (c,) = ec_search(ONE, CIRCLE)
    assert c.s_coords == (Fraction(7, 10),)
    assert -0.1 < c.t < 0 and c.residual <= 1e-9 and c.verified
    # re-verify from scratch
    x, y = spiral_point(ONE, c.t, 0.7)
    assert abs((x - 3) ** 2 + y ** 2 - 1) <= 1e-9
    m = green_member(ONE, (x, y))
    assert m.member and m.s_coords == (Fraction(7, 10),)


def test_ec_identity_point():
    (c,) = ec_search(ONE, system("x1 - 1", "y1"))
    assert c.s_coords == (Fraction(0),) and c.t == 0 and c.verified


def test_ec_not_found_reports_windows():
    with pytest.raises(NotFound) as e:
        ec_search(ONE, system("1"), grid=10)
    assert e.value.windows["grid"] == 10


def test_ec_product_system():
    V = system("(x1 - 3)^2 + y1^2 - 1", "(x2 - 3)^2 + y2^2 - 1")
    certs = ec_search(ONE, V)
    assert len(certs) == 2 and all(c.verified for c in certs)
    with pytest.raises(ValueError):
        ec_search(ONE, system("x1 - x2"))


# ---------------------------------------------------------------------------
# relation ledger
# ---------------------------------------------------------------------------

def test_ledger_single_generator():
    rep = relation_ledger(ONE, [([], [1])])
    assert rep.md_exact == 1 and rep.relations.rank == 0
    assert rep.bound == "delta >= -3*1 - trd(K)"
    assert "not verified" in rep.trd_note


def test_ledger_square():
    rep = relation_ledger(ONE, [([(1, "1")], [Fraction(1, 3)]), ([(2, "1")], [Fraction(2, 3)])])
    assert rep.md_exact == 1
    assert rep.relations.contains([2, -1])
    assert all(r <= 1e-9 for r in rep.residuals)


def test_ledger_resonance():
    # with Q spanned by 1 and pi, z2 = exp(eps*(t + 2 pi) + s - 2 pi) equals z1
    p = SpiralParams.make(1, [(1, "1"), (1, "pi")])
    rep = relation_ledger(p, [([(1, "1")], [0, 0]), ([(1, "1"), (2, "pi/beta")], [0, -2])])
    assert rep.md_exact == 1 and rep.relations.contains([1, -1])
    assert all(r <= 1e-9 for r in rep.residuals)


def test_ledger_rejects_float_t():
    with pytest.raises(NonSymbolicT):
        relation_ledger(ONE, [(0.5, [1])])
    with pytest.raises(NonSymbolicT):
        relation_ledger(ONE, [([(0.5, "1")], [1])])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=3),
       st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_ledger_relations_evaluate_to_identity(base, mult):
    # samples that are integer combinations of a few generators, so relations exist
    p = SpiralParams.make(1)
    samples = []
    for a, b in base:
        samples.append(([(Fraction(a, 2), "1")], [Fraction(b, 3)]))
    for k, (a, b) in zip(mult, base):
        samples.append(([(Fraction(k * a, 2), "1")], [Fraction(k * b, 3)]))
    rep = relation_ledger(p, samples)
    assert all(r <= 1e-9 for r in rep.residuals)
    for m in rep.relations.basis.rows:
        z = complex(1)
        for mj, (t, s) in zip(m, samples):
            z *= cmath.exp(mj * ((1 + 1j) * float(t[0][0]) + float(s[0])))
        assert abs(z - 1) <= 1e-9
