"""Algebraic subgroups of tori as integer lattices, monomial maps, divisible hulls."""

from __future__ import annotations

from typing import Optional, Sequence, Tuple

from .exactalg.intmat import IntMatrix, hnf_basis, left_kernel, rank as int_rank, saturate_rows
from .exactalg.poly import RationalFunction


class ZeroCoordinate(ValueError):
    """A point passed to a monomial map has a zero coordinate."""


class LatticeError(ValueError):
    """Dimension mismatch or a violated containment precondition."""


class ExponentLattice:
    """Integer row lattice in Z^n stored by its canonical HNF basis."""

    __slots__ = ("ambient_n", "basis")

    def __init__(self, generators: IntMatrix | Sequence[Sequence[int]], ambient_n: Optional[int] = None):
        if not isinstance(generators, IntMatrix):
            generators = list(generators)
            if ambient_n is None:
                if not generators:
                    raise LatticeError("empty generator list needs ambient_n")
                ambient_n = len(generators[0])
            generators = IntMatrix(generators, ambient_n)
        if ambient_n is not None and generators.ncols != ambient_n:
            raise LatticeError("generator width does not match ambient dimension")
        self.ambient_n = generators.ncols
        self.basis = hnf_basis(generators) if generators.nrows else generators

    @classmethod
    def zero(cls, n: int) -> "ExponentLattice":
        return cls(IntMatrix([], n))

    @classmethod
    def full(cls, n: int) -> "ExponentLattice":
        return cls(IntMatrix.identity(n))

    @property
    def rank(self) -> int:
        return self.basis.nrows

    def vectors(self):
        return [list(r) for r in self.basis.rows]

    def contains(self, v: Sequence[int]) -> bool:
        """Exact membership v in L (not the hull)."""
        if len(v) != self.ambient_n:
            raise LatticeError("vector length does not match lattice dimension")
        if not any(v):
            return True
        if self.rank == 0:
            return False
        stacked = IntMatrix(list(self.basis.rows) + [tuple(v)], self.ambient_n)
        return ExponentLattice(stacked) == self

    def __eq__(self, other):
        if isinstance(other, ExponentLattice):
            return self.ambient_n == other.ambient_n and self.basis == other.basis
        return NotImplemented

    def __hash__(self):
        return hash((self.ambient_n, self.basis))

    def __repr__(self):
        return f"ExponentLattice(n={self.ambient_n}, basis={self.basis.tolist()})"


class TorusSubgroup:
    """Subgroup {z : M(z) = 1} of (K^x)^n, with M full-rank and HNF-canonical.

    Two subgroups are equal exactly when their defining lattices agree.
    """

    __slots__ = ("ambient_n", "defining")

    def __init__(self, defining: IntMatrix | Sequence[Sequence[int]], ambient_n: Optional[int] = None):
        lat = ExponentLattice(defining, ambient_n)
        self.ambient_n = lat.ambient_n
        self.defining = lat.basis

    @property
    def codim(self) -> int:
        return self.defining.nrows

    @property
    def dim(self) -> int:
        return self.ambient_n - self.defining.nrows

    def __eq__(self, other):
        if isinstance(other, TorusSubgroup):
            return self.ambient_n == other.ambient_n and self.defining == other.defining
        return NotImplemented

    def __hash__(self):
        return hash((self.ambient_n, self.defining))

    def __repr__(self):
        return f"TorusSubgroup(n={self.ambient_n}, M={self.defining.tolist()})"


class Coset:
    """Coset rep * A of a torus subgroup A.

    The representative is a tuple of nonzero rational functions, or None when
    it is given by a tagged green word (then `word` names it).
    """

    __slots__ = ("subgroup", "representative", "word")

    def __init__(self, subgroup: TorusSubgroup, representative: Optional[Tuple[RationalFunction, ...]] = None,
                 word: Optional[str] = None):
        if representative is not None:
            representative = tuple(representative)
            if len(representative) != subgroup.ambient_n:
                raise LatticeError("representative length does not match subgroup")
            if any(r.is_zero() for r in representative):
                raise ZeroCoordinate("coset representative has a zero coordinate")
        self.subgroup = subgroup
        self.representative = representative
        self.word = word

    def __repr__(self):
        rep = self.word if self.representative is None else tuple(str(r) for r in self.representative)
        return f"Coset({self.subgroup!r}, {rep})"


def monomial_apply(M: IntMatrix | Sequence[Sequence[int]], z: Sequence[RationalFunction]) -> Tuple[RationalFunction, ...]:
    """Component i is prod_j z_j^M[i][j]."""
    if not isinstance(M, IntMatrix):
        if any(len(r) != len(z) for r in M):
            raise LatticeError("monomial map width does not match point length")
        M = IntMatrix(M, len(z))
    if M.ncols != len(z):
        raise LatticeError("monomial map width does not match point length")
    for zj in z:
        if zj.is_zero():
            raise ZeroCoordinate("monomial map applied at a point with a zero coordinate")
    out = []
    for row in M.rows:
        pos = None
        neg = None
        for zj, k in zip(z, row):
            if k > 0:
                f = zj ** k
                pos = f if pos is None else pos * f
            elif k < 0:
                f = zj ** (-k)
                neg = f if neg is None else neg * f
        if pos is None:
            pos = RationalFunction.const(z[0].vars, 1)
        out.append(pos if neg is None else pos / neg)
    return tuple(out)


def saturate(L: ExponentLattice) -> ExponentLattice:
    """Z^n intersected with the Q-span of L (via Smith normal form)."""
    if L.rank == 0:
        return L
    return ExponentLattice(saturate_rows(L.basis))


def hull_member(v: Sequence[int], L: ExponentLattice) -> bool:
    """True iff some positive multiple of v lies in L."""
    if len(v) != L.ambient_n:
        raise LatticeError("vector length does not match lattice dimension")
    if not any(v):
        return True
    if L.rank == 0:
        return False
    stacked = IntMatrix(list(L.basis.rows) + [tuple(v)], L.ambient_n)
    return int_rank(stacked) == L.rank


def subgroup_dim(A: TorusSubgroup) -> int:
    return A.dim


def lattice_sum(L1: ExponentLattice, L2: ExponentLattice) -> ExponentLattice:
    _same(L1, L2)
    return ExponentLattice(L1.basis.stack(L2.basis))


def lattice_intersect(L1: ExponentLattice, L2: ExponentLattice) -> ExponentLattice:
    """L1 cap L2: solve x*B1 = y*B2 through the left kernel of [B1; -B2]."""
    _same(L1, L2)
    n = L1.ambient_n
    if L1.rank == 0 or L2.rank == 0:
        return ExponentLattice.zero(n)
    neg = IntMatrix([[-x for x in r] for r in L2.basis.rows], n)
    K = left_kernel(L1.basis.stack(neg))
    if K.nrows == 0:
        return ExponentLattice.zero(n)
    coeffs = K.select_cols(range(L1.rank))
    return ExponentLattice(coeffs @ L1.basis)


def quotient_rank(L1: ExponentLattice, L2: ExponentLattice) -> int:
    """rank L1 - rank L2, requiring L2 inside the saturation of L1."""
    _same(L1, L2)
    S = saturate(L1)
    for v in L2.basis.rows:
        if not hull_member(v, S):
            raise LatticeError("quotient_rank requires L2 contained in L1 after saturation")
    return L1.rank - L2.rank


def lattice_ops(L1: ExponentLattice, L2: ExponentLattice, op: str):
    if op == "sum":
        return lattice_sum(L1, L2)
    if op == "intersect":
        return lattice_intersect(L1, L2)
    if op == "quotient_rank":
        return quotient_rank(L1, L2)
    raise ValueError(f"unknown lattice operation {op!r}")


def _same(L1: ExponentLattice, L2: ExponentLattice):
    if L1.ambient_n != L2.ambient_n:
        raise LatticeError("lattices live in different ambient dimensions")


def coset_member(z: Sequence[RationalFunction], c: Coset, rep_values: Optional[Sequence[RationalFunction]] = None) -> bool:
    """True iff M(z) = M(rep) exactly, M the defining matrix of c's subgroup.

    When c is given by a green word, the caller supplies its coordinates in
    rep_values.
    """
    rep = c.representative if c.representative is not None else rep_values
    if rep is None:
        raise LatticeError("coset representative not resolved")
    if len(z) != c.subgroup.ambient_n:
        raise LatticeError("point length does not match coset")
    M = c.subgroup.defining
    if M.nrows == 0:
        for zj in z:
            if zj.is_zero():
                raise ZeroCoordinate("coset test at a point with a zero coordinate")
        return True
    z = tuple(z)
    rep = tuple(rep)
    if len(rep[0].vars) != len(z[0].vars) or rep[0].vars != z[0].vars:
        union = tuple(dict.fromkeys(z[0].vars + rep[0].vars))
        z = tuple(x.embed(union) for x in z)
        rep = tuple(x.embed(union) for x in rep)
    return monomial_apply(M, z) == monomial_apply(M, rep)
