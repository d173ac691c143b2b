"""Matrices of rational functions and their exact rank.

Rank is computed in two stages.  Evaluating at a random point modulo a large
prime p = 1 mod 4 (with i sent to a square root of -1) is a ring map from the
p-integral part of Q(i)[t] to F_p, so any nonzero minor found there is a
nonzero minor over the function field: the modular rank is a certified lower
bound.  When that bound is below min(rows, cols) we finish with fraction-free
(Bareiss) elimination over the polynomial ring, which is exact.
"""

from __future__ import annotations

import random
from typing import List, Sequence

from .poly import DivisionByZero, MultiPoly, RationalFunction, poly_gcd

PRIME = 2305843009213693973
SQRT_M1 = 1035093963448091331

assert SQRT_M1 * SQRT_M1 % PRIME == PRIME - 1


class FunMatrix:
    """Rectangular grid of rational functions over a common variable tuple."""

    __slots__ = ("entries", "nrows", "ncols", "vars")

    def __init__(self, entries: Sequence[Sequence[RationalFunction]], variables=None, ncols=None):
        entries = tuple(tuple(r) for r in entries)
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        for r in entries:
            if len(r) != ncols:
                raise ValueError("ragged function matrix")
        if variables is None:
            variables = entries[0][0].vars if entries and ncols else ()
        self.entries = entries
        self.nrows = len(entries)
        self.ncols = ncols
        self.vars = tuple(variables)

    @classmethod
    def from_nested(cls, rows, variables) -> "FunMatrix":
        """Build from nested lists of ints/Fractions/GaussianRationals/polys/RFs."""
        out = []
        for r in rows:
            rr = []
            for x in r:
                if isinstance(x, RationalFunction):
                    rr.append(x)
                elif isinstance(x, MultiPoly):
                    rr.append(RationalFunction.from_poly(x))
                else:
                    rr.append(RationalFunction.const(variables, x))
            out.append(rr)
        return cls(out, variables)

    def __repr__(self):
        return "FunMatrix([" + "; ".join(", ".join(str(x) for x in r) for r in self.entries) + "])"


class ModEchelon:
    """Row echelon basis over F_p supporting incremental rank queries."""

    __slots__ = ("p", "rows", "pivots")

    def __init__(self, p: int = PRIME):
        self.p = p
        self.rows: List[List[int]] = []
        self.pivots: List[int] = []

    def copy(self) -> "ModEchelon":
        e = ModEchelon(self.p)
        e.rows = list(self.rows)
        e.pivots = list(self.pivots)
        return e

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence[int]) -> List[int]:
        p = self.p
        v = [x % p for x in v]
        for r, c in zip(self.rows, self.pivots):
            f = v[c]
            if f:
                v = [(a - f * b) % p for a, b in zip(v, r)]
        return v

    def add(self, v: Sequence[int]) -> bool:
        """Insert v; True when it was independent of the current rows."""
        v = self.reduce(v)
        for c, x in enumerate(v):
            if x:
                inv = pow(x, -1, self.p)
                self.rows.append([a * inv % self.p for a in v])
                self.pivots.append(c)
                return True
        return False

    def rank_increment(self, vs) -> int:
        e = self.copy()
        return sum(1 for v in vs if e.add(v))


def random_point_mod(nvars: int, rng: random.Random, p: int = PRIME) -> List[int]:
    return [rng.randrange(1, p) for _ in range(nvars)]


def mod_rank(rows: List[List[int]], p: int = PRIME) -> int:
    """Rank of an integer matrix over F_p (rows are mutated copies)."""
    A = [r[:] for r in rows]
    if not A:
        return 0
    nc = len(A[0])
    r = 0
    for c in range(nc):
        piv = None
        for i in range(r, len(A)):
            if A[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        Ar = [x * inv % p for x in A[r]]
        A[r] = Ar
        for i in range(len(A)):
            if i != r and A[i][c] % p:
                f = A[i][c]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], Ar)]
        r += 1
        if r == len(A):
            break
    return r


def eval_matrix_mod(m: FunMatrix, point: Sequence[int], p: int = PRIME, sqrt_m1: int = SQRT_M1):
    return [[e.eval_mod(point, p, sqrt_m1) for e in row] for row in m.entries]


def rank_lower_bound(m: FunMatrix, trials: int = 2, seed: int = 0) -> int:
    """Certified lower bound for the rank via modular evaluation."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    rng = random.Random(seed)
    best = 0
    target = min(m.nrows, m.ncols)
    for _ in range(trials):
        point = random_point_mod(len(m.vars), rng)
        try:
            vals = eval_matrix_mod(m, point)
        except (DivisionByZero, ValueError, ZeroDivisionError):
            continue
        best = max(best, mod_rank(vals))
        if best == target:
            break
    return best


def _clear_row(row: Sequence[RationalFunction]) -> List[MultiPoly]:
    """Multiply a row by the lcm of its denominators."""
    variables = row[0].vars
    lcm = MultiPoly.const(variables, 1)
    for e in row:
        if not e.den.is_one():
            g = poly_gcd(lcm, e.den)
            lcm = lcm * e.den.exquo(g)
    return [e.num * lcm.exquo(e.den) for e in row]


def bareiss_rank(rows: List[List[MultiPoly]]) -> int:
    """Exact rank of a polynomial matrix by fraction-free elimination."""
    A = [r[:] for r in rows]
    if not A:
        return 0
    nr, nc = len(A), len(A[0])
    variables = A[0][0].vars if nc else ()
    prev = MultiPoly.const(variables, 1)
    r = 0
    for c in range(nc):
        if r == nr:
            break
        piv = None
        best = None
        for i in range(r, nr):
            if not A[i][c].is_zero():
                size = len(A[i][c].terms)
                if best is None or size < best:
                    piv, best = i, size
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        for i in range(r + 1, nr):
            a_ic = A[i][c]
            row_i = A[i]
            for j in range(c + 1, nc):
                v = row_i[j] * p - a_ic * A[r][j]
                row_i[j] = v.exquo(prev) if not prev.is_one() else v
            row_i[c] = MultiPoly.zero(variables)
        prev = p
        r += 1
    return r


def rank_upper_bound(m: FunMatrix) -> int:
    """min(#nonzero rows, #nonzero columns)."""
    rows = sum(1 for r in m.entries if any(not e.is_zero() for e in r))
    cols = sum(1 for j in range(m.ncols) if any(not r[j].is_zero() for r in m.entries))
    return min(rows, cols)


def rank_exact(m: FunMatrix, seed: int = 0, lower: int = 0) -> int:
    """Rank over the rational function field Q(i)(t).

    `lower` may pass in an already certified lower bound.
    """
    if m.nrows == 0 or m.ncols == 0:
        return 0
    upper = rank_upper_bound(m)
    if lower >= upper:
        return upper
    lower = max(lower, rank_lower_bound(m, seed=seed))
    if lower == upper:
        return lower
    rows = [_clear_row(r) for r in m.entries]
    rows = [r for r in rows if any(not x.is_zero() for x in r)]
    if len(rows) <= lower:
        return lower
    return bareiss_rank(rows)
