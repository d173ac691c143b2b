"""Coprime factor bases for polynomials and Gaussian-integer valuations."""

from __future__ import annotations

from math import gcd, isqrt
from typing import Dict, List, Sequence, Tuple

from .gaussian import GaussianRational
from .intmat import IntMatrix, left_kernel
from .poly import MultiPoly, NotDivisible, poly_gcd

DEFAULT_TRIAL_BOUND = 100_000


class ZeroInput(ValueError):
    """A zero polynomial or constant was passed where a unit is required."""


class FactorizationBoundExceeded(ArithmeticError):
    """An integer could not be factored within the trial-division bound."""


# ---------------------------------------------------------------------------
# coprime bases
# ---------------------------------------------------------------------------

def coprime_basis(fs: Sequence[MultiPoly]):
    """Pairwise coprime monic basis with f_j = consts_j * prod basis_k^exps[j][k]."""
    for f in fs:
        if f.is_zero():
            raise ZeroInput("coprime_basis needs nonzero polynomials")
    pieces: List[MultiPoly] = []
    seen = set()
    for f in fs:
        if not f.is_const():
            m = f.monic()
            if m not in seen:
                seen.add(m)
                pieces.append(m)
    changed = True
    while changed:
        changed = False
        n = len(pieces)
        for a in range(n):
            for b in range(a + 1, n):
                d = poly_gcd(pieces[a], pieces[b])
                if d.is_one():
                    continue
                pa, pb = pieces[a].exquo(d), pieces[b].exquo(d)
                rest = [pieces[k] for k in range(n) if k not in (a, b)]
                for q in (pa, d, pb):
                    if not q.is_const():
                        q = q.monic()
                        if q not in rest:
                            rest.append(q)
                pieces = rest
                changed = True
                break
            if changed:
                break
    basis = sorted(pieces, key=lambda p: p.sort_key())
    exps = []
    consts = []
    for f in fs:
        row = []
        rem = f
        for b in basis:
            k = 0
            while not rem.is_const():
                try:
                    q = rem.exquo(b)
                except NotDivisible:
                    break
                rem = q
                k += 1
            row.append(k)
        if not rem.is_const():
            raise ArithmeticError("coprime basis failed to factor an input")
        exps.append(row)
        consts.append(rem.const_value())
    return basis, IntMatrix(exps, len(basis)), consts


# ---------------------------------------------------------------------------
# Gaussian integers
# ---------------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_MR_LIMIT = 3317044064679887385961981


def factor_int(n: int, bound: int = DEFAULT_TRIAL_BOUND) -> Dict[int, int]:
    """Prime factorization of |n| by trial division up to bound.

    A leftover cofactor is accepted when it is below bound**2 or passes a
    deterministic primality test; otherwise FactorizationBoundExceeded.
    """
    n = abs(n)
    if n == 0:
        raise ZeroInput("cannot factor zero")
    out: Dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 5
    step = 2
    while p <= bound and p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    if n > 1:
        if n < bound * bound or n < p * p or (n < _MR_LIMIT and _is_probable_prime(n)):
            out[n] = out.get(n, 0) + 1
        else:
            raise FactorizationBoundExceeded(f"cofactor {n} not factored within bound {bound}")
    return out


def _sum_two_squares(p: int) -> Tuple[int, int]:
    """For a prime p = 1 mod 4 return (a, b) with a^2 + b^2 = p, a > b > 0."""
    for c in range(2, p):
        r = pow(c, (p - 1) // 4, p)
        if r * r % p == p - 1:
            break
    a, b = p, r
    lim = isqrt(p)
    while b > lim:
        a, b = b, a % b
    x = b
    y = isqrt(p - x * x)
    if x < y:
        x, y = y, x
    return x, y


def _gi_divmod_exact(a: Tuple[int, int], d: Tuple[int, int]):
    """(a / d) in Z[i] if exact, else None."""
    ar, ai = a
    dr, di = d
    n = dr * dr + di * di
    qr = ar * dr + ai * di
    qi = ai * dr - ar * di
    if qr % n or qi % n:
        return None
    return (qr // n, qi // n)


def _gi_valuation(a: Tuple[int, int], pi: Tuple[int, int]) -> Tuple[int, Tuple[int, int]]:
    k = 0
    while True:
        q = _gi_divmod_exact(a, pi)
        if q is None:
            return k, a
        a = q
        k += 1


def gaussian_primes_of(c: GaussianRational, bound: int = DEFAULT_TRIAL_BOUND):
    """Valuations of c at the Gaussian primes dividing it.

    Returns a dict keyed by canonical prime labels (1+i, p for p = 3 mod 4,
    and the pair a+bi, a-bi for p = 1 mod 4).
    """
    if c.is_zero():
        raise ZeroInput("zero has no valuations")
    den = c.re.denominator * c.im.denominator // gcd(c.re.denominator, c.im.denominator)
    g = (int(c.re * den), int(c.im * den))
    vals: Dict[Tuple[int, int], int] = {}
    norm = g[0] * g[0] + g[1] * g[1]
    for p, _ in factor_int(norm, bound).items():
        for pi in _primes_over(p):
            k, g = _gi_valuation(g, pi)
            if k:
                vals[pi] = vals.get(pi, 0) + k
    if den > 1:
        for p, e in factor_int(den, bound).items():
            if p == 2:
                vals[(1, 1)] = vals.get((1, 1), 0) - 2 * e
            elif p % 4 == 3:
                vals[(p, 0)] = vals.get((p, 0), 0) - e
            else:
                a, b = _sum_two_squares(p)
                vals[(a, b)] = vals.get((a, b), 0) - e
                vals[(a, -b)] = vals.get((a, -b), 0) - e
    return {k: v for k, v in vals.items() if v}


def _primes_over(p: int):
    if p == 2:
        return [(1, 1)]
    if p % 4 == 3:
        return [(p, 0)]
    a, b = _sum_two_squares(p)
    return [(a, b), (a, -b)]


def valuation_matrix(cs: Sequence[GaussianRational], bound: int = DEFAULT_TRIAL_BOUND):
    """Rows are constants, columns are Gaussian primes (sorted labels)."""
    per = []
    for c in cs:
        c = GaussianRational.coerce(c)
        if c.is_zero():
            raise ZeroInput("gaussian_unit_lattice needs nonzero constants")
        per.append(gaussian_primes_of(c, bound))
    primes = sorted({p for d in per for p in d})
    rows = [[d.get(p, 0) for p in primes] for d in per]
    return IntMatrix(rows, len(primes)), primes


def gaussian_unit_lattice(cs: Sequence[GaussianRational], bound: int = DEFAULT_TRIAL_BOUND):
    """Lattice of m with prod cs_j^m_j in {1, -1, i, -i}."""
    from ..torus import ExponentLattice

    vm, _ = valuation_matrix(cs, bound)
    n = len(cs)
    if vm.ncols == 0:
        return ExponentLattice(IntMatrix.identity(n))
    return ExponentLattice(left_kernel(vm))


def gaussian_power_product(cs: Sequence[GaussianRational], m: Sequence[int]) -> GaussianRational:
    out = GaussianRational(1)
    for c, k in zip(cs, m):
        if k:
            out = out * GaussianRational.coerce(c) ** int(k)
    return out
