"""Canonical enumeration of integer matrices in Hermite normal form.

Candidates are listed by row count k, then pivot columns (lexicographic),
then pivot values, then the remaining entries in row-major product order.
Pivots lie in [1, B], entries above a pivot in [0, pivot), free entries to
the right of a row's pivot in [-B, B].  Every listed matrix is an HNF of
full row rank, so each row lattice appears once.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Tuple

from ..exactalg.intmat import IntMatrix, saturate_rows

Rows = Tuple[Tuple[int, ...], ...]


def _cells(n: int, pivots: Tuple[int, ...], pvals: Tuple[int, ...], B: int):
    k = len(pivots)
    cells = []
    for i in range(k):
        for j in range(pivots[i] + 1, n):
            if j in pivots:
                owner = pivots.index(j)
                rng = range(0, pvals[owner])
            else:
                rng = range(-B, B + 1)
            cells.append(((i, j), rng))
    return cells


CACHE_LIMIT = 200_000


def iter_hnf(n: int, B: int, kmin: int = 1, kmax: int | None = None) -> Iterator[Rows]:
    if kmax is None:
        kmax = n
    for k in range(kmin, kmax + 1):
        if count_hnf(n, B, k) <= CACHE_LIMIT:
            yield from hnf_list(n, B, k)
        else:
            yield from _iter_k(n, B, k)


@lru_cache(maxsize=64)
def hnf_list(n: int, B: int, k: int) -> Tuple[Rows, ...]:
    return tuple(_iter_k(n, B, k))


def _iter_k(n: int, B: int, k: int) -> Iterator[Rows]:
    for pivots in combinations(range(n), k):
        for pvals in product(range(1, B + 1), repeat=k):
            cells = _cells(n, pivots, pvals, B)
            positions = [c[0] for c in cells]
            for values in product(*[c[1] for c in cells]):
                M = [[0] * n for _ in range(k)]
                for i in range(k):
                    M[i][pivots[i]] = pvals[i]
                for (i, j), v in zip(positions, values):
                    M[i][j] = v
                yield tuple(tuple(r) for r in M)


@lru_cache(maxsize=None)
def count_hnf(n: int, B: int, k: int) -> int:
    total = 0
    for pivots in combinations(range(n), k):
        for pvals in product(range(1, B + 1), repeat=k):
            m = 1
            for _, rng in _cells(n, pivots, pvals, B):
                m *= len(rng)
            total += m
    return total


@lru_cache(maxsize=200_000)
def saturated_form(rows: Rows, n: int) -> Rows:
    """Canonical HNF basis of the saturation of the row lattice."""
    return saturate_rows(IntMatrix(rows, n)).rows


def is_saturated(rows: Rows, n: int) -> bool:
    return saturated_form(rows, n) == rows
