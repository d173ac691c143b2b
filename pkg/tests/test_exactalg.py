from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from greenlab.exactalg import (FactorizationBoundExceeded, FunMatrix, GaussianRational, IntMatrix,
                               MultiPoly, RationalFunction, ZeroInput, coprime_basis,
                               gaussian_unit_lattice, hnf, hnf_basis, left_kernel, poly_gcd, rank_exact,
                               right_kernel, snf)
from greenlab.exactalg.factor import factor_int

small = st.integers(-6, 6)
frac = st.fractions(min_value=-5, max_value=5, max_denominator=7)
gauss = st.builds(GaussianRational, frac, frac)

X = ("x", "y")


def poly_from(coeffs, variables=X):
    """sum c_(a,b) x^a y^b from a dict of exponent tuples."""
    return MultiPoly(variables, {e: GaussianRational(c) for e, c in coeffs.items() if c})


poly_st = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small, max_size=4).map(poly_from)


def to_sympy(f: MultiPoly):
    x, y = sp.symbols("x y")
    out = 0
    for e, c in f.terms.items():
        out += (sp.Rational(c.re.numerator, c.re.denominator)
                + sp.I * sp.Rational(c.im.numerator, c.im.denominator)) * x ** e[0] * y ** e[1]
    return sp.expand(out)


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

@given(gauss, gauss)
def test_gaussian_field_ops_match_complex(a, b):
    assert (a + b).to_complex() == pytest.approx(a.to_complex() + b.to_complex())
    assert (a * b).to_complex() == pytest.approx(a.to_complex() * b.to_complex())
    if not b.is_zero():
        assert (a / b) * b == a
        assert b * b.inverse() == GaussianRational(1)


@given(gauss)
def test_gaussian_norm_and_conjugate(a):
    assert a * a.conjugate() == GaussianRational(a.norm())
    assert a.conjugate().conjugate() == a


def test_torsion_is_exactly_the_fourth_roots_of_unity():
    for c, tors in [((1, 0), True), ((-1, 0), True), ((0, 1), True), ((0, -1), True),
                    ((2, 0), False), ((1, 1), False), ((Fraction(3, 5), Fraction(4, 5)), False)]:
        assert GaussianRational(*c).is_torsion() is tors


# ---------------------------------------------------------------------------
# polynomials and rational functions
# ---------------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(poly_st, poly_st, poly_st)
def test_gcd_matches_sympy(a, b, c):
    if a.is_zero() and b.is_zero():
        return
    g = poly_gcd(a * c, b * c)
    ref = sp.gcd(to_sympy(a * c), to_sympy(b * c))
    # equal up to a unit of Q(i)
    ratio = sp.simplify(to_sympy(g) / ref) if ref != 0 else None
    if ref == 0:
        assert g.is_zero()
    else:
        assert ratio.free_symbols == set()


@settings(max_examples=60, deadline=None)
@given(poly_st, poly_st, poly_st)
def test_rational_function_canonical_form(a, b, c):
    if b.is_zero() or c.is_zero():
        return
    assert RationalFunction(a * c, b * c) == RationalFunction(a, b)


def test_rational_function_arithmetic():
    x = RationalFunction.var(X, "x")
    y = RationalFunction.var(X, "y")
    f = (x * x - y * y) / (x - y)
    assert f == x + y
    assert (x / y).partial(1) == -(x / (y * y))
    assert str(x / (x * y + 1)).count("(") >= 1


def test_division_by_zero_polynomial():
    x = RationalFunction.var(X, "x")
    with pytest.raises(ZeroDivisionError):
        x / (x - x)


def test_embed_reorders_variables():
    f = RationalFunction.var(("a", "b"), "a") / (RationalFunction.var(("a", "b"), "b") * 2 + 1)
    g = f.embed(("b", "c", "a"))
    assert g.embed(("a", "b", "c")) == f.embed(("a", "b", "c"))
    assert g.evaluate([Fraction(1), Fraction(0), Fraction(3)]) == GaussianRational(1)


# ---------------------------------------------------------------------------
# integer matrices
# ---------------------------------------------------------------------------

int_rows = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=1, max_size=4))


def sympy_invariants(rows):
    from sympy.matrices.normalforms import smith_normal_form
    from sympy.polys.domains import ZZ
    D = smith_normal_form(sp.Matrix(rows), domain=ZZ)
    return sorted(abs(D[i, i]) for i in range(min(D.shape)) if D[i, i] != 0)


@settings(max_examples=80, deadline=None)
@given(int_rows)
def test_snf_invariants_match_sympy(rows):
    M = IntMatrix(rows)
    S = snf(M)[0]
    mine = sorted(abs(S.tolist()[i][i]) for i in range(min(S.nrows, S.ncols)) if S.tolist()[i][i])
    assert mine == sympy_invariants(rows)


@settings(max_examples=80, deadline=None)
@given(int_rows)
def test_hnf_is_normal_and_same_lattice(rows):
    M = IntMatrix(rows)
    H, U = hnf(M)
    assert (U @ M) == H
    assert abs(sp.Matrix(U.tolist()).det()) == 1
    last = -1
    for r in H.nonzero_rows().tolist():
        p = next(j for j, v in enumerate(r) if v)
        assert p > last and r[p] > 0
        last = p
    Hb = hnf_basis(M)
    assert sp.Matrix(Hb.tolist()).rank() == sp.Matrix(rows).rank()
    # idempotent
    assert hnf_basis(Hb) == Hb


@settings(max_examples=80, deadline=None)
@given(int_rows)
def test_kernels(rows):
    M = IntMatrix(rows)
    r = sp.Matrix(rows).rank()
    L = left_kernel(M)
    R = right_kernel(M)
    assert L.nrows == M.nrows - r
    assert R.nrows == M.ncols - r
    for v in L.tolist():
        assert all(x == 0 for x in (IntMatrix([v]) @ M).tolist()[0])
    for v in R.tolist():
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in rows)


# ---------------------------------------------------------------------------
# function matrices
# ---------------------------------------------------------------------------

def test_rank_exact_matches_sympy_on_jacobians():
    t = ("t1", "t2", "t3")
    T = [RationalFunction.var(t, v) for v in t]
    rows = [[T[0] * T[1], T[0], RationalFunction.const(t, 0)],
            [T[1], RationalFunction.const(t, 1), RationalFunction.const(t, 0)],
            [T[0] * T[1] + T[1], T[0] + 1, RationalFunction.const(t, 0)]]
    m = FunMatrix(rows, t)
    s1, s2, s3 = sp.symbols("t1 t2 t3")
    ref = sp.Matrix([[s1 * s2, s1, 0], [s2, 1, 0], [s1 * s2 + s2, s1 + 1, 0]]).rank()
    assert ref == 1
    assert rank_exact(m) == ref
    m2 = FunMatrix([rows[0], rows[1], [T[2], T[0], T[1] * T[2]]], t)
    ref2 = sp.Matrix([[s1 * s2, s1, 0], [s2, 1, 0], [s3, s1, s2 * s3]]).rank()
    assert rank_exact(m2) == ref2 == 2


# ---------------------------------------------------------------------------
# factoring helpers
# ---------------------------------------------------------------------------

def test_coprime_basis_reconstructs():
    x = MultiPoly.var(X, "x")
    y = MultiPoly.var(X, "y")
    fs = [x * x * (x + y), (x + y) * (x + y) * y, x * y]
    basis, exps, consts = coprime_basis(fs)
    for f, c, e in zip(fs, consts, exps.tolist()):
        prod = MultiPoly.const(X, c)
        for b, k in zip(basis, e):
            for _ in range(k):
                prod = prod * b
        assert prod == f
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            assert poly_gcd(basis[i], basis[j]).is_const()


def test_coprime_basis_rejects_zero():
    with pytest.raises(ZeroInput):
        coprime_basis([MultiPoly.zero(X)])


@given(st.integers(1, 10 ** 6))
def test_factor_int_matches_sympy(n):
    assert factor_int(n) == sp.factorint(n)


def test_factorization_bound():
    p = 1000003 * 1000033
    with pytest.raises(FactorizationBoundExceeded):
        factor_int(p, bound=1000)


def test_gaussian_unit_lattice():
    # (1+i)^2 = 2i, so 2 * (1+i)^-2 is torsion
    L = gaussian_unit_lattice([GaussianRational(2), GaussianRational(1, 1), GaussianRational(3)])
    assert L.contains([1, -2, 0])
    assert not L.contains([0, 0, 1])
    assert L.rank == 1
