"""Rotundity of symbolic loci, generic hyperplanes and the phi_V sentences.

A tuple of points a presents the locus V of a.  For an integer matrix M the
real dimension of M(V) equals trd(M(a)), the rank of M*W stacked with M*W',
where W and W' are the logarithmic Jacobians of z and of its conjugate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .config.engine import engine_for
from .config.model import BoundedVerdict, Configuration, SubSelection
from .config.search import iter_hnf, saturated_form
from .exactalg.funmatrix import FunMatrix, ModEchelon, rank_exact
from .exactalg.gaussian import GaussianRational, I
from .exactalg.intmat import IntMatrix
from .exactalg.poly import RationalFunction
from .torus import Coset, ExponentLattice, TorusSubgroup, ZeroCoordinate, coset_member, monomial_apply

DEFAULT_BOUND = 3


class DegenerateCoefficients(ValueError):
    """The linear system of a hyperplane cannot be solved for its pivot block."""


class EmptyMu(ValueError):
    """The premise of phi_V holds but no subgroup was supplied."""


@dataclass
class SymbolicLocus:
    """Generic point presentation of a variety: a tuple of point names."""

    config: Configuration
    witness: Tuple[str, ...]
    _logs: Optional[Tuple[FunMatrix, FunMatrix]] = field(default=None, repr=False)

    @property
    def logW(self) -> FunMatrix:
        return self._jac()[0]

    @property
    def logW_conj(self) -> FunMatrix:
        return self._jac()[1]

    def _jac(self):
        if self._logs is None:
            self._logs = log_jacobian(self.config, self.witness)
        return self._logs


@dataclass
class RotundityReport:
    verdict: BoundedVerdict
    strict_verdict: BoundedVerdict
    r_V: int
    hat_dim: int
    dim: int

    @property
    def rotund(self) -> bool:
        return not self.verdict.violated


def log_jacobian(config: Configuration, pts: Sequence[str]) -> Tuple[FunMatrix, FunMatrix]:
    """Rows (dz_j / z_j) and (d conj z_j / conj z_j) over the non-base transcendentals."""
    config.check_names(pts)
    eng = engine_for(config)
    W, Wc = [], []
    for p in pts:
        if config.zhat(p).is_zero():
            raise ZeroCoordinate(f"point {p!r} has z = 0")
        a, b = eng._dlog_rows_exact(p)
        W.append(a)
        Wc.append(b)
    nf = len(eng.free)
    return FunMatrix(W, config.transcendentals, nf), FunMatrix(Wc, config.transcendentals, nf)


def _hat_and_full(config: Configuration, pts: Sequence[str]) -> Tuple[int, int]:
    """(trd of z, trd of (z, conj z)) for the tuple, over the base."""
    W, Wc = log_jacobian(config, pts)
    hat = rank_exact(W)
    full = rank_exact(FunMatrix(W.entries + Wc.entries, config.transcendentals, W.ncols))
    return hat, full


def is_rotund(config: Configuration, pts: Sequence[str], B: int = DEFAULT_BOUND,
              over: Optional[SubSelection] = None) -> RotundityReport:
    """Search full-rank M (HNF, height <= B) with dim M(V) < rank M.

    The strict verdict instead asks for dim M(V) > rank M whenever
    rank M < n.  `over` is a selection the locus is taken over.
    """
    pts = tuple(pts)
    config.check_names(pts)
    n = len(pts)
    eng = engine_for(config)
    for p in pts:
        if config.zhat(p).is_zero():
            raise ZeroCoordinate(f"point {p!r} has z = 0")
    hat, full = _hat_and_full(config, pts) if n else (0, 0)
    if over is None:
        over = SubSelection((), ExponentLattice.zero(eng.g))
    over_combos = [eng.word_combo(w) for w in over.lattice.basis.rows]
    base_rank = None
    ech = eng.echelon(over.points, over_combos)
    rows_by_pt = [eng._dlog_rows_num(p, 0) for p in pts]
    nf = len(eng.free)
    first = first_strict = None
    seen: Dict = {}
    for M in (iter_hnf(n, B) if n else ()):
        k = len(M)
        need_strict = k + 1 if k < n else k
        rows = []
        for m in M:
            r1 = [0] * nf
            r2 = [0] * nf
            for c, (a, b) in zip(m, rows_by_pt):
                if c:
                    for j in range(nf):
                        r1[j] += c * a[j]
                        r2[j] += c * b[j]
            rows.append(r1)
            rows.append(r2)
        lb = ech.rank_increment(rows)
        if lb >= need_strict or (first_strict is not None and lb >= k):
            continue
        sat = saturated_form(M, n)
        r = seen.get(sat)
        if r is None:
            if base_rank is None:
                base_rank = eng.rank_of(over.points, over_combos)
            combos = over_combos + [tuple((p, c) for p, c in zip(pts, m) if c) for m in sat]
            r = eng.rank_of(over.points, combos) - base_rank
            seen[sat] = r
        if first_strict is None and r < need_strict:
            first_strict = (sat, r)
        if r < k:
            first = (sat, r)
            break

    def verdict(hit):
        if hit is None:
            return BoundedVerdict.certified(B)
        sat, r = hit
        return BoundedVerdict.violation(B, IntMatrix([list(x) for x in sat], n), dim=r, rank=len(sat))

    return RotundityReport(verdict(first), verdict(first_strict), full - hat, hat, full)


# ---------------------------------------------------------------------------
# generic hyperplanes
# ---------------------------------------------------------------------------

def _fresh(names, want: str) -> str:
    name, k = want, 1
    while name in names:
        k += 1
        name = f"{want}_{k}"
    return name


def _solve_gaussian(C: List[List[GaussianRational]], n: int):
    """Row-reduce [C1 | C2 | 1] to [I | C' | d]; DegenerateCoefficients if C1 is singular."""
    A = [list(r[:2 * n]) + [GaussianRational.coerce(1)] for r in C]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            raise DegenerateCoefficients(f"coefficient block is singular in column {c + 1}")
        A[c], A[piv] = A[piv], A[c]
        inv = A[c][c].inverse()
        A[c] = [x * inv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    cprime = [[A[i][n + j] for j in range(n)] for i in range(n)]
    d = [A[i][2 * n] for i in range(n)]
    return cprime, d


def gen_hyperplane(config: Configuration, n: int, coeffs: Optional[Sequence[Sequence]] = None,
                   prefix: str = "h", green: bool = False) -> Tuple[Configuration, SymbolicLocus]:
    """Adjoin 2n points on n generic hyperplanes sum_j c_ij z_j = 1.

    The system is used in the solved form z_i = d_i - sum_j c'_ij z_{n+j}
    with z_{n+j} = u_j + i v_j free.  With coeffs None the d_i and c'_ij are
    fresh transcendentals placed in the base; otherwise coeffs is an n x 2n
    matrix of (Gaussian) rationals.
    """
    if n < 1:
        raise ValueError("n must be positive")
    taken = set(config.transcendentals) | set(config.points)
    old_base = config.base
    nb = config.base_nvars
    coeff_vars: List[str] = []
    if coeffs is None:
        for i in range(n):
            for part in ("re", "im"):
                v = _fresh(taken, f"d{i + 1}{part}")
                taken.add(v)
                coeff_vars.append(v)
            for j in range(n):
                for part in ("re", "im"):
                    v = _fresh(taken, f"c{i + 1}{j + 1}{part}")
                    taken.add(v)
                    coeff_vars.append(v)
    else:
        if len(coeffs) != n or any(len(r) != 2 * n for r in coeffs):
            raise ValueError(f"expected an {n} x {2 * n} coefficient matrix")
    free_vars = []
    for j in range(n):
        for part in ("u", "v"):
            v = _fresh(taken, f"{part}{j + 1}")
            taken.add(v)
            free_vars.append(v)
    trans = (config.transcendentals[:nb] + tuple(coeff_vars) + config.transcendentals[nb:]
             + tuple(free_vars))
    var = lambda name: RationalFunction.var(trans, trans.index(name))
    const = lambda c: RationalFunction.const(trans, c)
    free_z = [var(free_vars[2 * j]) + var(free_vars[2 * j + 1]) * I for j in range(n)]
    if coeffs is None:
        stride = 2 + 2 * n
        dz, cz = [], []
        for i in range(n):
            off = i * stride
            dz.append(var(coeff_vars[off]) + var(coeff_vars[off + 1]) * I)
            cz.append([var(coeff_vars[off + 2 + 2 * j]) + var(coeff_vars[off + 3 + 2 * j]) * I
                       for j in range(n)])
    else:
        C = [[GaussianRational.coerce(x) for x in r] for r in coeffs]
        cprime, d = _solve_gaussian(C, n)
        dz = [const(x) for x in d]
        cz = [[const(x) for x in r] for r in cprime]
    names = []
    points = dict(config.points)
    zs = []
    for i in range(n):
        z = dz[i]
        for j in range(n):
            z = z - cz[i][j] * free_z[j]
        if z.is_zero():
            raise DegenerateCoefficients(f"solved coordinate {i + 1} vanishes identically")
        zs.append(z)
    zs.extend(free_z)
    for k, z in enumerate(zs):
        name = _fresh(taken, f"{prefix}{k + 1}")
        taken.add(name)
        names.append(name)
        points[name] = (z.real_part(), z.imag_part())
    greens = list(config.greens) + (names if green else [])
    base = old_base
    if coeff_vars:
        if old_base is None:
            base = Configuration(tuple(coeff_vars), {})
        else:
            base = Configuration(old_base.transcendentals + tuple(coeff_vars), old_base.points, old_base.greens)
    ext = Configuration(trans, points, greens, base)
    return ext, SymbolicLocus(ext, tuple(names))


# ---------------------------------------------------------------------------
# phi_V evaluated against supplied subgroups
# ---------------------------------------------------------------------------

@dataclass
class PhiVerdict:
    status: str  # holds | fails | premise_false
    reason: str = ""
    dim: int = 0
    r_V: int = 0
    fiber_dim: int = 0
    witness: Optional[object] = None
    empty_mu: bool = False


def check_phi_V(config: Configuration, pts: Sequence[str], mu: Sequence[TorusSubgroup],
                cosets: Sequence = (), strictness: str = "base-free") -> PhiVerdict:
    """Evaluate phi_V at the green tuple pts, V being the locus of pts.

    phi_V belongs to the axiom family only when dim V < n; otherwise it
    holds vacuously.  The premise compares the fiber dimension
    trd(conj z / z) with r_V.  In base-relative mode the conclusion asks
    for M_i(z) in one of the proper cosets attached to mu[i]; cosets is a
    list of (i, Coset) pairs or Cosets matched to every mu[i] of the right
    size.
    """
    if strictness not in ("base-free", "base-relative"):
        raise ValueError("strictness must be 'base-free' or 'base-relative'")
    pts = tuple(pts)
    config.check_names(pts)
    for p in pts:
        if not config.is_green(p):
            raise ValueError(f"point {p!r} is not green")
    cfg = config if strictness == "base-relative" else config.replace(base=None)
    n = len(pts)
    hat, full = _hat_and_full(cfg, pts) if n else (0, 0)
    r_V = full - hat
    if full >= n:
        return PhiVerdict("holds", "vacuous: dim V >= n, not an instance of the axiom family", full, r_V)
    # fiber dimension of V~ over z, by the relative Jacobian rank
    W, Wc = log_jacobian(cfg, pts)
    fiber = rank_exact(FunMatrix(W.entries + Wc.entries, cfg.transcendentals, W.ncols)) - rank_exact(W)
    zs = [cfg.zhat(p) for p in pts]
    if strictness == "base-relative":
        zero = RationalFunction.const(cfg.transcendentals, 0)
        for A in mu:
            M = A.defining
            if M.ncols != n:
                raise ValueError("subgroup ambient dimension does not match the tuple")
            MW = [[sum((W.entries[j][c] * M.rows[i][j] for j in range(n)), zero) for c in range(W.ncols)]
                  for i in range(M.nrows)]
            dim_img = rank_exact(FunMatrix(MW, cfg.transcendentals, W.ncols)) if MW else 0
            stacked = rank_exact(FunMatrix(W.entries + tuple(tuple(r) for r in MW), cfg.transcendentals, W.ncols))
            if stacked - dim_img != hat - dim_img:
                return PhiVerdict("premise_false", "dim(V^ cap zB) differs from dim V^ - dim M(V^)",
                                  full, r_V, fiber)
    if fiber != r_V:
        return PhiVerdict("premise_false", "dim V~(z, -) != r_V", full, r_V, fiber)
    if not mu:
        return PhiVerdict("fails", "EmptyMu: premise holds and no subgroup was supplied", full, r_V, fiber,
                          empty_mu=True)
    if strictness == "base-free":
        for idx, A in enumerate(mu):
            if A.ambient_n != n:
                raise ValueError("subgroup ambient dimension does not match the tuple")
            one = tuple(RationalFunction.const(cfg.transcendentals, 1) for _ in range(n))
            if coset_member(zs, Coset(A, one)):
                return PhiVerdict("holds", f"z lies in subgroup {idx}", full, r_V, fiber, witness=(idx, A))
        return PhiVerdict("fails", "premise holds but z lies in no supplied subgroup", full, r_V, fiber)
    pairs = []
    for c in cosets:
        if isinstance(c, tuple):
            pairs.append(c)
        else:
            pairs.extend((i, c) for i, A in enumerate(mu) if A.codim == c.subgroup.ambient_n)
    for i, c in pairs:
        A = mu[i]
        if c.subgroup.codim == 0:
            continue  # A_ij must be proper
        image = monomial_apply(A.defining, zs)
        if coset_member(image, c):
            return PhiVerdict("holds", f"M_{i}(z) lies in a supplied proper coset", full, r_V, fiber, witness=(i, c))
    return PhiVerdict("fails", "premise holds but no supplied coset contains M_i(z)", full, r_V, fiber)
