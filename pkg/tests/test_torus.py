import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from greenlab.exactalg import RationalFunction
from greenlab.torus import (Coset, ExponentLattice, LatticeError, TorusSubgroup, ZeroCoordinate, coset_member,
                            hull_member, lattice_intersect, lattice_sum, monomial_apply, quotient_rank, saturate)

N = 3
vec = st.lists(st.integers(-6, 6), min_size=N, max_size=N)
lat = st.lists(vec, min_size=0, max_size=3).map(lambda rows: ExponentLattice(rows, N) if rows else ExponentLattice.zero(N))

T = ("a", "b")
A = RationalFunction.var(T, "a")
B = RationalFunction.var(T, "b")


def in_qspan(v, L: ExponentLattice) -> bool:
    """Oracle: rank test with sympy."""
    if L.rank == 0:
        return not any(v)
    return sp.Matrix(L.basis.tolist() + [list(v)]).rank() == L.rank


@settings(max_examples=100, deadline=None)
@given(vec, lat, st.integers(-5, 5).filter(bool))
def test_hull_member_scaling(v, L, k):
    assert hull_member(v, L) == hull_member([k * x for x in v], L) == in_qspan(v, L)


@settings(max_examples=100, deadline=None)
@given(lat)
def test_saturate_is_idempotent_and_same_span(L):
    S = saturate(L)
    assert saturate(S) == S
    assert S.rank == L.rank
    for r in L.basis.tolist():
        assert S.contains(r)
    # saturated: the Smith invariants of a saturated basis are all 1
    if S.rank:
        from sympy.matrices.normalforms import smith_normal_form
        from sympy.polys.domains import ZZ
        D = smith_normal_form(sp.Matrix(S.basis.tolist()), domain=ZZ)
        assert all(abs(D[i, i]) == 1 for i in range(S.rank))


def test_saturate_example():
    S = saturate(ExponentLattice([[2, 4, 0]], 3))
    assert S.contains([1, 2, 0])
    assert not ExponentLattice([[2, 4, 0]], 3).contains([1, 2, 0])


@settings(max_examples=100, deadline=None)
@given(lat, lat)
def test_sum_and_intersection_ranks(L1, L2):
    s = lattice_sum(L1, L2)
    i = lattice_intersect(L1, L2)
    # rank of the Q-spans: dim(U + W) + dim(U cap W) = dim U + dim W
    assert s.rank + i.rank == L1.rank + L2.rank
    for r in i.basis.tolist():
        assert L1.contains(r) and L2.contains(r)


def test_quotient_rank_requires_containment():
    L1 = ExponentLattice([[1, 0, 0], [0, 1, 0]], 3)
    L2 = ExponentLattice([[2, 2, 0]], 3)
    assert quotient_rank(L1, L2) == 1
    with pytest.raises(LatticeError):
        quotient_rank(L2, ExponentLattice([[0, 0, 1]], 3))


def test_torus_subgroup_dimensions():
    H = TorusSubgroup([[2, -1, 0]], 3)
    assert H.codim == 1 and H.dim == 2
    assert TorusSubgroup([[4, -2, 0]], 3).dim == 2


def test_monomial_apply_and_coset():
    z = (A, A * A, B)
    assert monomial_apply([[2, -1, 0]], z) == (RationalFunction.const(T, 1),)
    H = TorusSubgroup([[2, -1, 0]], 3)
    one = RationalFunction.const(T, 1)
    assert coset_member(z, Coset(H, (one, one, one)))
    assert not coset_member((A, B, B), Coset(H, (one, one, one)))
    with pytest.raises(ZeroCoordinate):
        monomial_apply([[1, 0, 0]], (A - A, A, B))
    with pytest.raises(ZeroCoordinate):
        Coset(H, (one, A - A, one))
    with pytest.raises(LatticeError):
        monomial_apply([[1, 0]], z)
