import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import corpus_config, join, meet, random_closed
from greenlab.cli import ParseError, parse_config
from greenlab.config import (AlgebraicGreen, ConfigError, Configuration, DuplicateName, SubSelection, UnknownName, ZeroGreen,
                             cl_geom_member, classify_extension, delta, dim_d, engine_for, hull, is_strong,
                             md_cl_green, trd, validate)
from greenlab.torus import ExponentLattice, saturate


def cfg(text):
    return parse_config(text).config


GENERIC = cfg("transcendentals t1 t2\ngreen z = (t1, t2)\n")
SQUARE = cfg("transcendentals t1 t2\ngreen z1 = (t1, t2)\ngreen z2 = (t1^2 - t2^2, 2*t1*t2)\n")
W_EX = cfg("transcendentals t1 t2\ngreen z = (t1, t2)\ngreen w = (t1^2 + t2^2, 0)\n")


def sel(c, pts=(), words=()):
    return SubSelection.of(c, pts, words)


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def test_identity_green_is_valid():
    validate(cfg("green one = (1, 0)"))


def test_constant_green_rejected():
    with pytest.raises(AlgebraicGreen):
        validate(cfg("green z = (2, 0)"))


def test_zero_green_is_parsed_then_rejected():
    c = cfg("green z = (0, 0)")
    with pytest.raises(ZeroGreen):
        validate(c)


def test_duplicate_names():
    with pytest.raises(DuplicateName):
        Configuration(("t", "t"), {})
    with pytest.raises(ParseError):
        cfg("transcendentals t\npoint a = (t, 0)\npoint a = (t, 1)")


def test_relation_lattice_of_square():
    rep = validate(SQUARE)
    assert rep.relation_lattice == ExponentLattice([[2, -1]], 2)


def test_relation_lattice_detects_constant_torsion():
    # z2 = i * z1 so z1^-1 z2 is torsion; z3 = 2 z1 is not
    c = cfg("transcendentals t1 t2\ngreen z1 = (t1, t2)\ngreen z2 = (-t2, t1)\ngreen z3 = (2*t1, 2*t2)")
    rep = validate(c)
    assert rep.relation_lattice.contains([1, -1, 0])
    assert not rep.relation_lattice.contains([1, 0, -1])
    assert rep.relation_lattice.rank == 1


# ---------------------------------------------------------------------------
# trd, md, delta
# ---------------------------------------------------------------------------

def test_trd_examples():
    c = cfg("transcendentals t1 t2\npoint a = (t1, t2)\npoint b = (t1, t1^2)\npoint k = (3, 0)")
    assert trd(c, ["a"]) == 2
    assert trd(c, ["b"]) == 1
    assert trd(c, ["k"]) == 0
    assert trd(c, ["b"], sel(c, ["a"])) == 0
    with pytest.raises(UnknownName):
        trd(c, ["nope"])


def test_md_examples():
    assert md_cl_green(GENERIC, ["z"]) == 1
    c = cfg("transcendentals t1 t2 t3 t4\npoint p = (t1, t2)\ngreen g = (t3, t4)")
    assert md_cl_green(c, ["p"]) == 0
    assert md_cl_green(SQUARE, ["z1", "z2"]) == 1
    # z1 alone already captures z2 in its divisible hull
    assert md_cl_green(SQUARE, ["z1"]) == 1


def test_delta_examples():
    assert delta(GENERIC, []) == 0
    assert delta(GENERIC, ["z"]) == 1
    assert delta(SQUARE, ["z1", "z2"]) == 1


def test_delta_of_real_green_is_zero():
    c = cfg("transcendentals t1\ngreen r = (t1, 0)")
    assert delta(c, ["r"]) == 0


# ---------------------------------------------------------------------------
# strongness, hull, d, Cl
# ---------------------------------------------------------------------------

def test_everything_is_strong():
    v = is_strong(W_EX, SubSelection.everything(W_EX), 3)
    assert not v.violated and v.bound == 3


def test_w_witness_violates():
    v = is_strong(W_EX, sel(W_EX, ["z"]), 3)
    assert v.violated
    assert v.witness.tolist() == [[0, 1]]
    w = sel(W_EX, [], v.witness.tolist())
    assert delta(W_EX, w, sel(W_EX, ["z"])) == -1


def test_empty_is_strong_for_generic_greens():
    assert not is_strong(SQUARE, SubSelection.empty(SQUARE), 3).violated


def test_hull_adjoins_w():
    h, v = hull(W_EX, sel(W_EX, ["z"]), 3)
    assert not v.violated
    assert h.lattice == ExponentLattice([[0, 1]], 2)
    h2, _ = hull(W_EX, h, 3)
    assert h2 == h


def test_hull_of_strong_set_is_unchanged():
    X = SubSelection.everything(SQUARE)
    h, _ = hull(SQUARE, X, 3)
    assert h.points == X.points
    assert saturate(h.lattice) == saturate(engine_for(SQUARE).hull_lattice(X))


def test_dim_examples():
    c = cfg("transcendentals t1 t2\npoint p = (t1, t2)")
    assert dim_d(c, ["p"])[0] == 2
    assert dim_d(GENERIC, ["z"])[0] == 1
    # w over the hull of z costs nothing
    h, _ = hull(W_EX, sel(W_EX, ["z"]), 3)
    assert delta(W_EX, sel(W_EX, ["w"]), h) == 0


def test_cl_membership():
    c = cfg("transcendentals t1 t2 t9\ngreen z = (t1, t2)\npoint q = (t9, 0)\npoint r = (t1, 0)")
    X = sel(c, ["z"])
    assert cl_geom_member(c, "z", X, 3).violated
    assert not cl_geom_member(c, "q", X, 3).violated
    assert cl_geom_member(c, "r", X, 3).violated


def test_classify_examples():
    c = cfg("transcendentals t1 t2 t3 t4 t5 t6\ngreen z = (t1, t2)\ngreen u = (t3, 0)\npoint p = (t6, 0)\n"
            "green a = (t4, t2)\ngreen b = (t5, t1)")
    X = sel(c, ["z"])
    X = sel(c, ["z"], engine_for(c).hull_lattice(X).basis.tolist())
    k = classify_extension(c, X, sel(c, ["z", "u"]), 3)
    assert k.kind == "prealgebraic" and k.delta == 0
    k = classify_extension(c, X, sel(c, ["z", "p"]), 3)
    assert k.kind == "purely_transcendental" and k.delta == 1
    k = classify_extension(c, X, sel(c, ["z", "a", "b"]), 3)
    assert k.kind == "not_minimal"
    k = classify_extension(W_EX, sel(W_EX, ["z"]), SubSelection.everything(W_EX), 3)
    assert k.kind == "not_strong"


# ---------------------------------------------------------------------------
# property tests on the random corpus
# ---------------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_submodularity(seed):
    c, rng = corpus_config(seed)
    X, Y = random_closed(c, rng), random_closed(c, rng)
    assert delta(c, join(c, X, Y)) + delta(c, meet(c, X, Y)) <= delta(c, X) + delta(c, Y)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_localization_additivity(seed):
    c, rng = corpus_config(seed)
    X, Y = random_closed(c, rng), random_closed(c, rng)
    assert delta(c, join(c, X, Y)) == delta(c, X, Y) + delta(c, Y)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_md_modularity(seed):
    c, rng = corpus_config(seed)
    eng = engine_for(c)
    K = eng.K()
    Ls = []
    for _ in range(2):
        words = [[rng.randint(-2, 2) for _ in range(c.ngreens)] for _ in range(rng.randint(0, 2))]
        W = SubSelection.of(c, [], words) if any(any(w) for w in words) else SubSelection.empty(c)
        Ls.append(SubSelection.of(c, [], eng.hull_lattice(W).basis.tolist() or []))
    X, Y = Ls
    assert md_cl_green(c, join(c, X, Y)) + md_cl_green(c, meet(c, X, Y)) == \
        md_cl_green(c, X) + md_cl_green(c, Y)
    assert K.rank <= eng.hull_lattice(X).rank


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_d_bounds(seed):
    c, rng = corpus_config(seed)
    pts = [p for p in c.point_names if rng.random() < 0.5]
    d, v = dim_d(c, pts, 2)
    assert d <= trd(c, pts)
    h, _ = hull(c, SubSelection.of(c, pts), 2)
    assert d == delta(c, h)
    more = pts + [p for p in c.point_names if p not in pts][:1]
    assert dim_d(c, more, 2)[0] >= d or v.violated


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_md_invariant_under_saturation(seed):
    c, rng = corpus_config(seed)
    k = rng.randint(2, 3)
    words = [[rng.randint(-2, 2) for _ in range(c.ngreens)]]
    if not any(words[0]):
        return
    scaled = [[k * x for x in words[0]]]
    assert md_cl_green(c, SubSelection.of(c, [], words)) == md_cl_green(c, SubSelection.of(c, [], scaled))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_trd_invariant_under_permutation_and_redundant_points(seed):
    c, rng = corpus_config(seed)
    pts = list(c.point_names)
    rng.shuffle(pts)
    assert trd(c, pts) == trd(c, list(c.point_names)) == trd(c, pts + pts[:1])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_rank_reductions_match_full_jacobian(seed):
    # rank_of drops dlog terms of selected points and splits disjoint blocks; compare with the
    # unreduced Jacobian evaluated exactly at random rational points, combining per-green rows by hand
    from fractions import Fraction
    from corpus import complex_rank
    c, rng = corpus_config(seed)
    eng = engine_for(c)
    pts = [p for p in c.point_names if rng.random() < 0.5]
    words = [[rng.randint(-2, 2) for _ in range(c.ngreens)] for _ in range(rng.randint(0, 2))]
    combos = [eng.word_combo(w) for w in words if any(w)]
    best = 0
    for _ in range(3):
        at = [Fraction(rng.randint(2, 97), rng.randint(2, 13)) for _ in c.transcendentals]

        def ev(rows):
            return [[f.evaluate(at) for f in r] for r in rows]
        try:
            vals = ev(eng.rows_exact(pts, []))
            for cb in combos:
                acc = [[0] * len(eng.free) for _ in range(2)]
                for name, k in cb:
                    one = ev(eng.rows_exact([], [((name, 1),)]))
                    acc = [[a + k * v for a, v in zip(ra, rv)] for ra, rv in zip(acc, one)]
                vals.extend(acc)
        except ZeroDivisionError:
            continue
        pairs = [[(v.re, v.im) if not isinstance(v, int) else (v, 0) for v in r] for r in vals]
        best = max(best, complex_rank(pairs) if pairs else 0)
    assert eng.rank_of(pts, combos) == best
