import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import random_config_text
from greenlab.cli import parse_config
from greenlab.config import ConfigError, SubSelection, trd, validate
from greenlab.exactalg import GaussianRational, IntMatrix, RationalFunction
from greenlab.rotund import (DegenerateCoefficients, EmptyMu, check_phi_V, gen_hyperplane, is_rotund,
                             log_jacobian)
from greenlab.torus import Coset, TorusSubgroup, ZeroCoordinate


def cfg(text):
    return parse_config(text).config


GENERIC = cfg("transcendentals t1 t2\ngreen z = (t1, t2)")
SQUARE = cfg("transcendentals t1 t2\ngreen z1 = (t1, t2)\ngreen z2 = (t1^2 - t2^2, 2*t1*t2)")
REAL_SQ = cfg("transcendentals r\ngreen a = (r, 0)\ngreen b = (r^2, 0)")


def test_log_jacobian_examples():
    c = cfg("transcendentals t1 t2\ngreen r = (t1, 0)\ngreen z = (t1, t2)\npoint k = (5, 0)")
    W, Wc = log_jacobian(c, ["r"])
    t1 = RationalFunction.var(c.transcendentals, "t1")
    zero = RationalFunction.const(c.transcendentals, 0)
    assert W.entries[0] == (1 / t1, zero) == Wc.entries[0]
    W, Wc = log_jacobian(c, ["z"])
    zhat = c.zhat("z")
    i = GaussianRational(0, 1)
    assert W.entries[0][0] == 1 / zhat
    assert W.entries[0][1] == (zhat ** 0 * i) / zhat
    assert Wc.entries[0][1] == (zhat ** 0 * (-i)) / zhat.conjugate()
    W, _ = log_jacobian(c, ["k"])
    assert all(e.is_zero() for e in W.entries[0])


def test_log_jacobian_zero_point():
    c = cfg("transcendentals t\npoint o = (0, 0)")
    with pytest.raises(ZeroCoordinate):
        log_jacobian(c, ["o"])


def test_generic_point_is_rotund():
    rep = is_rotund(GENERIC, ["z"], 3)
    # V has real dimension 2; its complexification z-hat = t1 + i t2 has dimension 1
    assert rep.rotund and rep.dim == 2 and rep.hat_dim == 1 and rep.r_V == 1


def test_square_is_not_rotund():
    rep = is_rotund(SQUARE, ["z1", "z2"], 2)
    assert rep.verdict.violated
    assert rep.verdict.witness.tolist() == [[2, -1]]
    assert rep.verdict.bound == 2


def test_empty_tuple_is_rotund():
    rep = is_rotund(GENERIC, [], 3)
    assert rep.rotund and not rep.strict_verdict.violated


def test_r_v_zero_iff_conjugate_is_algebraic():
    c = cfg("transcendentals t1 t2\ngreen r = (t1, 0)\ngreen z = (t1, t2)\ngreen u = (t1, t1^2)")
    assert is_rotund(c, ["r"], 1).r_V == 0
    assert is_rotund(c, ["z"], 1).r_V == 1
    # conj u = t1 - i t1^2 is algebraic over u = t1 + i t1^2
    rep = is_rotund(c, ["u"], 1)
    assert rep.hat_dim == 1 and rep.dim == 1 and rep.r_V == 0
    # a real point on a one-dimensional curve: conj z = z
    assert is_rotund(REAL_SQ, ["a"], 1).r_V == 0


def test_r_v_is_real_minus_complex_dimension():
    c = cfg("transcendentals t1 t2\ngreen z = (t1, t2)\ngreen w = (t1 + t2, 0)")
    rep = is_rotund(c, ["z"], 1)
    assert rep.dim - rep.hat_dim == rep.r_V


# ---------------------------------------------------------------------------
# Prop 4.3 invariants on the random corpus
# ---------------------------------------------------------------------------

def corpus(seed):
    rng = random.Random(seed)
    while True:
        c = cfg(random_config_text(rng, max_greens=2, max_trans=3))
        try:
            validate(c)
            return c
        except ConfigError:
            continue


def scaled(c, const: GaussianRational):
    pts = {}
    for name in c.point_names:
        x, y = c.coords(name)
        if c.is_green(name):
            a, b = const.re, const.im
            x, y = x * a - y * b, y * a + x * b
        pts[name] = (x, y)
    return c.replace(points=pts)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([GaussianRational(2), GaussianRational(1, 1),
                                                   GaussianRational(Fraction(-3, 2), 5)]))
def test_scaling_invariance(seed, const):
    c = corpus(seed)
    a = is_rotund(c, list(c.greens), 2)
    b = is_rotund(scaled(c, const), list(c.greens), 2)
    assert a.verdict.violated == b.verdict.violated
    assert a.verdict.witness == b.verdict.witness
    assert a.strict_verdict.violated == b.strict_verdict.violated


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-3, 3))
def test_rowspace_invariance(seed, q):
    c = corpus(seed)
    n = c.ngreens
    rng = random.Random(seed)
    M = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(1, n))]
    if all(not any(r) for r in M):
        return
    if len(M) == 2:
        U = [[1, q], [0, 1]]
        UM = (IntMatrix(U) @ IntMatrix(M)).tolist()
    else:
        UM = [[-x for x in M[0]]]
    assert trd(c, SubSelection.of(c, [], M)) == trd(c, SubSelection.of(c, [], UM))


# ---------------------------------------------------------------------------
# generic hyperplanes
# ---------------------------------------------------------------------------

def test_hyperplane_n1_fresh_is_strictly_rotund():
    ext, loc = gen_hyperplane(cfg(""), 1)
    rep = is_rotund(ext, loc.witness, 3)
    assert len(loc.witness) == 2
    assert rep.dim == 2
    assert not rep.strict_verdict.violated and rep.strict_verdict.bound == 3


def test_hyperplane_supplied_coefficients():
    ext, loc = gen_hyperplane(cfg(""), 1, [[2, 3]])
    rep = is_rotund(ext, loc.witness, 3)
    assert rep.dim == 2 and not rep.verdict.violated
    z1, z2 = (ext.zhat(p) for p in loc.witness)
    assert (z1 * 2 + z2 * 3).is_const() and (z1 * 2 + z2 * 3).const_value() == GaussianRational(1)


def test_hyperplane_degenerate():
    with pytest.raises(DegenerateCoefficients):
        gen_hyperplane(cfg(""), 1, [[0, 0]])


def test_hyperplane_names_are_fresh():
    base = cfg("transcendentals u1\npoint h1 = (u1, 0)")
    ext, loc = gen_hyperplane(base, 1)
    assert "h1" not in loc.witness
    assert set(base.transcendentals) <= set(ext.transcendentals)


# ---------------------------------------------------------------------------
# phi_V
# ---------------------------------------------------------------------------

A21 = TorusSubgroup([[2, -1]], 2)
A11 = TorusSubgroup([[1, -1]], 2)


def test_phi_vacuous_for_full_dimension():
    v = check_phi_V(GENERIC, ["z"], [])
    assert v.status == "holds" and "vacuous" in v.reason


def test_phi_square_generic_is_vacuous():
    # (z, z^2) for generic complex z has dim V = 2 = n
    v = check_phi_V(SQUARE, ["z1", "z2"], [A21])
    assert v.status == "holds"


def test_phi_real_square_holds_with_witness():
    v = check_phi_V(REAL_SQ, ["a", "b"], [A21])
    assert v.status == "holds" and v.witness is not None and v.dim == 1


def test_phi_real_square_fails_with_wrong_subgroup():
    v = check_phi_V(REAL_SQ, ["a", "b"], [A11])
    assert v.status == "fails"


def test_phi_empty_mu_is_reported():
    v = check_phi_V(REAL_SQ, ["a", "b"], [])
    assert v.status == "fails" and v.empty_mu
    assert EmptyMu.__name__ in v.reason or "empty" in v.reason


def test_phi_base_relative_coset():
    # cosets live in the image torus of M_i: here K^x, with the proper subgroup {1}
    trivial = TorusSubgroup([[1]], 1)
    one = RationalFunction.const(REAL_SQ.transcendentals, 1)
    two = RationalFunction.const(REAL_SQ.transcendentals, 2)
    ok = check_phi_V(REAL_SQ, ["a", "b"], [A21], [Coset(trivial, (one,))], "base-relative")
    assert ok.status == "holds"
    bad = check_phi_V(REAL_SQ, ["a", "b"], [A21], [Coset(trivial, (two,))], "base-relative")
    assert bad.status == "fails"
    whole = TorusSubgroup(IntMatrix([], 1), 1)
    improper = check_phi_V(REAL_SQ, ["a", "b"], [A21], [(0, Coset(whole, (one,)))], "base-relative")
    assert improper.status == "fails"


def test_phi_rejects_non_green():
    c = cfg("transcendentals t\npoint p = (t, 0)")
    with pytest.raises(ValueError):
        check_phi_V(c, ["p"], [])
