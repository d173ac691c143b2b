import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import random_amalgam_texts
from greenlab.amalgam import NameClash, NotStrong, free_amalgam, iterate_copies, verify_amalgam
from greenlab.cli import parse_config
from greenlab.config import SubSelection, delta, engine_for, md_cl_green, trd, validate


def cfg(text):
    return parse_config(text).config


ONE = cfg("transcendentals t1 t2\ngreen z = (t1, t2)")
W_EX = cfg("transcendentals t1 t2\ngreen z = (t1, t2)\ngreen w = (t1^2 + t2^2, 0)")


def test_degenerate_amalgam_over_everything():
    X = SubSelection.everything(ONE)
    a = free_amalgam(X, ONE, ONE, 3)
    assert a.result.point_names == ONE.point_names
    assert a.embed_Y == a.embed_Z == {"z": "z"}
    rep = verify_amalgam(a, 3, ONE, ONE)
    assert rep.ok and not rep.failures


def test_two_generic_greens_over_initial():
    X = SubSelection.empty(ONE)
    a = free_amalgam(X, ONE, ONE, 3)
    W = a.result
    assert W.ngreens == 2
    assert len(W.transcendentals) == 4
    assert a.freshness == {"t1": "t1'", "t2": "t2'"}
    assert a.embed_Z == {"z": "z_2"}
    vY = set(ONE.transcendentals)
    vZ = {W.transcendentals[i] for f in W.coords("z_2") for i in f.support_vars()}
    assert not vY & vZ
    rep = verify_amalgam(a, 3, ONE, ONE)
    assert rep.ok and rep.checked > 0
    assert rep.delta_identity == (2, 1, 1, 0)


def test_not_strong_side_is_reported():
    with pytest.raises(NotStrong) as e:
        free_amalgam(SubSelection.of(W_EX, ["z"]), W_EX, W_EX, 3)
    assert e.value.side == "Y"
    assert e.value.verdict.witness.tolist() == [[0, 1]]


def test_negative_control_shared_transcendentals():
    Y = cfg("transcendentals s\ngreen a = (s, 1)")
    Z = cfg("transcendentals s\ngreen b = (s, 2)")
    a = free_amalgam(SubSelection.empty(Y), Y, Z, 3, fresh=False)
    rep = verify_amalgam(a, 3, Y, Z)
    assert not rep.ok
    good = verify_amalgam(free_amalgam(SubSelection.empty(Y), Y, Z, 3), 3, Y, Z)
    assert good.ok


def test_common_part_must_agree():
    Y = cfg("transcendentals t1 t2\ngreen z = (t1, t2)")
    Z = cfg("transcendentals t1 t2\ngreen z = (t2, t1)")
    with pytest.raises(NameClash):
        free_amalgam(SubSelection.of(Y, ["z"]), Y, Z, 3)


def test_freshness_needs_determined_support():
    # X = {r} uses t1 and t2 but only determines t1 + t2
    Y = cfg("transcendentals t1 t2\ngreen r = (t1 + t2, 0)\ngreen u = (t1, t2)")
    with pytest.raises(NameClash):
        free_amalgam(SubSelection.of(Y, ["r"]), Y, Y, 3, check=False)


def test_iterate_copies():
    W = iterate_copies(SubSelection.empty(ONE), ONE, 3, 3)
    assert W.ngreens == 3
    allW = SubSelection.everything(W)
    assert delta(W, allW) == 3 and md_cl_green(W, allW) == 3 and trd(W, allW) == 6
    # copies are pairwise independent
    names = W.greens
    for i in range(3):
        for j in range(i + 1, 3):
            assert trd(W, [names[i], names[j]]) == 4


def build(seed):
    rng = random.Random(seed)
    while True:
        ty, tz, xs = random_amalgam_texts(rng)
        Y, Z = cfg(ty), cfg(tz)
        try:
            validate(Y)
            validate(Z)
            return Y, Z, SubSelection.of(Y, xs)
        except Exception:
            continue


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_amalgam_invariants(seed):
    Y, Z, X = build(seed)
    try:
        a = free_amalgam(X, Y, Z, 2)
    except NotStrong:
        return
    W = a.result
    # embeddings are injective and the greens are the union of the images
    assert len(set(a.embed_Z.values())) == len(a.embed_Z)
    assert set(W.greens) == set(a.embed_Y[g] for g in Y.greens) | set(a.embed_Z[g] for g in Z.greens)
    # transcendental supports of the two images meet only inside X's
    support = lambda names: {W.transcendentals[i] for p in names for f in W.coords(p) for i in f.support_vars()}
    xs = support(X.points)
    ys = support([a.embed_Y[p] for p in Y.point_names if p not in X.points])
    zs = support([a.embed_Z[p] for p in Z.point_names if p not in X.points])
    assert ys & zs <= xs
    rep = verify_amalgam(a, 2, Y, Z)
    assert not rep.failures
    dW, dY, dZ, dX = rep.delta_identity
    assert dW == dY + dZ - dX
    assert engine_for(W).g == W.ngreens
