"""The logarithmic-spiral model G = exp(eps*R + Q), eps = 1 + beta*i.

Positions are floats.  Q is kept symbolic: a list of basis constants, each a
rational multiple of a named real constant (1, pi, ln p), so membership of
s in Q is an exact statement about rational coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy.optimize import brentq

from .exactalg.intmat import IntMatrix, left_kernel
from .torus import ExponentLattice

SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
EXP_LIMIT = 709.0


class Overflow(ArithmeticError):
    """exp(t + s) is outside the double range."""


class ZeroPoint(ValueError):
    pass


class WindowTooCoarse(ValueError):
    """The sign-change grid cannot resolve the requested window."""


class NotFound(LookupError):
    """No certificate within the searched windows (not a proof of emptiness)."""

    def __init__(self, msg: str, windows: Dict):
        super().__init__(msg)
        self.windows = windows


class NonSymbolicT(ValueError):
    """A sample's t is not given over the symbolic constant basis."""


# ---------------------------------------------------------------------------
# named constants and parameters
# ---------------------------------------------------------------------------

def constant_value(name: str) -> float:
    """Value of a named constant: '1', 'pi' or 'ln<p>' for a small prime p."""
    if name == "1":
        return 1.0
    if name == "pi":
        return math.pi
    if name.startswith("ln") and name[2:].isdigit() and int(name[2:]) in SMALL_PRIMES:
        return math.log(int(name[2:]))
    raise ValueError(f"unknown constant {name!r}; use 1, pi or ln<p> for a prime p <= 47")


@dataclass(frozen=True)
class QConst:
    """A basis element coef * const of Q."""

    coef: Fraction
    name: str = "1"

    def __post_init__(self):
        constant_value(self.name)
        if self.coef == 0:
            raise ValueError("a Q basis element cannot be zero")

    @property
    def value(self) -> float:
        return float(self.coef) * constant_value(self.name)

    def __str__(self):
        if self.name == "1":
            return str(self.coef)
        if self.coef == 1:
            return self.name
        return f"{self.coef}*{self.name}"


@dataclass(frozen=True)
class SpiralParams:
    beta: float
    q_basis: Tuple[QConst, ...] = (QConst(Fraction(1)),)
    k_window: Tuple[int, int] = (-50, 50)
    denom_bound: int = 64
    tol: float = 1e-9
    beta_exact: Optional[Fraction] = None

    def __post_init__(self):
        if self.beta == 0 or not math.isfinite(self.beta):
            raise ValueError("beta must be a nonzero finite number")
        if not self.q_basis:
            raise ValueError("Q needs a nonempty basis")
        names = [q.name for q in self.q_basis]
        if len(set(names)) != len(names):
            raise ValueError("Q basis constants must be distinct named constants")
        if self.k_window[0] > self.k_window[1]:
            raise ValueError("empty k window")

    @classmethod
    def make(cls, beta, q_basis=None, **kw) -> "SpiralParams":
        """Build from a number or decimal string for beta; keeps beta exactly when it is rational input."""
        exact = None
        if isinstance(beta, (int, Fraction)):
            exact = Fraction(beta)
        elif isinstance(beta, str):
            try:
                exact = Fraction(beta)
            except ValueError:
                exact = None
        qb = tuple(q if isinstance(q, QConst) else QConst(Fraction(q[0]), q[1]) for q in (q_basis or [(1, "1")]))
        return cls(float(beta), qb, beta_exact=exact, **kw)

    def s_value(self, coords: Sequence[Fraction]) -> float:
        return sum(float(c) * q.value for c, q in zip(coords, self.q_basis))


# ---------------------------------------------------------------------------
# points and membership
# ---------------------------------------------------------------------------

def spiral_point(params: SpiralParams, t: float, s: float) -> Tuple[float, float]:
    """exp(eps*t + s) as a point (x, y) of the plane."""
    e = t + s
    if not math.isfinite(e) or e > EXP_LIMIT:
        raise Overflow(f"exp({e}) overflows a double")
    r = math.exp(e)
    a = params.beta * t
    return r * math.cos(a), r * math.sin(a)


@dataclass
class Membership:
    member: bool
    t: Optional[float] = None
    s_coords: Optional[Tuple[Fraction, ...]] = None
    k: Optional[int] = None
    residual: Optional[float] = None
    s: Optional[float] = None
    bounds: Dict = field(default_factory=dict)


def _k_order(lo: int, hi: int, center: int = 0):
    center = min(max(center, lo), hi)
    yield center
    for d in range(1, hi - lo + 1):
        for k in (center + d, center - d):
            if lo <= k <= hi:
                yield k


def rational_coords(params: SpiralParams, s: float) -> Optional[Tuple[Tuple[Fraction, ...], float]]:
    """Q-coordinates of s with denominators <= denom_bound, when s is within tol of Q."""
    D = params.denom_bound
    basis = params.q_basis
    if len(basis) == 1:
        b = basis[0].value
        c = Fraction(s / b).limit_denominator(D)
        err = abs(float(c) * b - s)
        if err <= params.tol:
            return (c,), err
        return None
    # integer relation n0*s + sum n_j b_j = 0 with n0 != 0
    with mpmath.workdps(30):
        vec = [mpmath.mpf(s)] + [mpmath.mpf(q.value) for q in basis]
        rel = mpmath.pslq(vec, tol=mpmath.mpf(params.tol) / 10, maxcoeff=D * 64, maxsteps=4000)
    if rel is None or rel[0] == 0:
        return None
    coords = tuple(Fraction(-n, rel[0]) for n in rel[1:])
    if any(c.denominator > D for c in coords):
        return None
    err = abs(params.s_value(coords) - s)
    if err > params.tol:
        return None
    return coords, err


def green_member(params: SpiralParams, z: Tuple[float, float]) -> Membership:
    """Search branches k for t_k = (arg z + 2 pi k)/beta with s_k = ln|z| - t_k in Q."""
    x, y = z
    if x == 0 and y == 0:
        raise ZeroPoint("the origin is not on any spiral")
    theta = math.atan2(y, x)
    logr = math.log(math.hypot(x, y))
    lo, hi = params.k_window
    for k in _k_order(lo, hi, 0):
        t = (theta + 2 * math.pi * k) / params.beta
        s = logr - t
        found = rational_coords(params, s)
        if found is not None:
            coords, err = found
            return Membership(True, t, coords, k, err, params.s_value(coords))
    return Membership(False, bounds={"k_window": params.k_window, "denom_bound": params.denom_bound,
                                     "tol": params.tol})


# ---------------------------------------------------------------------------
# plane systems and fibers
# ---------------------------------------------------------------------------

class PlaneSystem:
    """Equalities g = 0 and inequalities h > 0 in x1, y1, ..., xn, yn.

    Each polynomial is given as a MultiPoly (exact) and compiled to a numpy
    evaluator.
    """

    def __init__(self, n: int, equalities: Sequence, inequalities: Sequence = ()):
        self.n = n
        self.equalities = tuple(equalities)
        self.inequalities = tuple(inequalities)
        self.vars = tuple(v for j in range(1, n + 1) for v in (f"x{j}", f"y{j}"))
        for p in self.equalities + self.inequalities:
            for name in p.vars:
                if name not in self.vars:
                    raise ValueError(f"variable {name!r} is not one of {self.vars}")
        self._eq = [self._compile(p) for p in self.equalities]
        self._gt = [self._compile(p) for p in self.inequalities]

    def _compile(self, p) -> Callable:
        pos = [self.vars.index(v) for v in p.vars]
        terms = []
        for e, c in p.terms.items():
            if not c.is_real():
                raise ValueError("plane systems need rational coefficients")
            terms.append((float(c.re), [(pos[i], k) for i, k in enumerate(e) if k]))

        def f(*coords):
            total = 0.0 * coords[0]
            for c, mono in terms:
                v = c
                for i, k in mono:
                    v = v * coords[i] ** k
                total = total + v
            return total
        return f

    @classmethod
    def circle(cls, cx, r, cy=0) -> "PlaneSystem":
        from .exactalg.poly import MultiPoly
        vs = ("x1", "y1")
        x, y = MultiPoly.var(vs, 0), MultiPoly.var(vs, 1)
        cx, cy, r = Fraction(cx), Fraction(cy), Fraction(r)
        g = (x - MultiPoly.const(vs, cx)) ** 2 + (y - MultiPoly.const(vs, cy)) ** 2 - MultiPoly.const(vs, r * r)
        return cls(1, [g])

    def eq_values(self, coords) -> List:
        return [f(*coords) for f in self._eq]

    def gt_values(self, coords) -> List:
        return [f(*coords) for f in self._gt]

    def product_factors(self) -> List["PlaneSystem"]:
        """Split an n = 2 product system into two n = 1 systems."""
        if self.n == 1:
            return [self]
        parts = [[[], []] for _ in range(self.n)]
        for kind, polys in ((0, self.equalities), (1, self.inequalities)):
            for p in polys:
                used = {p.vars[i] for i in p.support_vars()}
                blocks = {int(v[1:]) for v in used}
                if len(blocks) != 1:
                    raise ValueError("only product systems are supported for n > 1: each polynomial "
                                     "must involve one coordinate pair")
                j = blocks.pop()
                q = _restrict(p, j)
                parts[j - 1][kind].append(q)
        return [PlaneSystem(1, e, g) for e, g in parts]


def _restrict(p, j):
    """Rewrite a polynomial in x_j, y_j only as one in x1, y1."""
    from .exactalg.poly import MultiPoly
    vs = ("x1", "y1")
    ix, iy = p.vars.index(f"x{j}"), p.vars.index(f"y{j}")
    terms = {}
    for e, c in p.terms.items():
        terms[(e[ix], e[iy])] = c
    return MultiPoly(vs, terms)


@dataclass
class FiberRoots:
    roots: List[float]
    s: float
    t_window: Tuple[float, float]
    grid: int
    residuals: List[float]

    @property
    def count(self) -> int:
        return len(self.roots)


def _fiber_fn(params: SpiralParams, V: PlaneSystem, s: float):
    g = V._eq[0]
    beta = params.beta

    def f(t):
        r = np.exp(t + s)
        return g(r * np.cos(beta * t), r * np.sin(beta * t))
    return f


def lift_fiber_roots(params: SpiralParams, V: PlaneSystem, s: float,
                     t_window: Tuple[float, float] = (-0.1, 0.0), grid: int = 200) -> FiberRoots:
    """Roots t in the closed window of g(spiral_point(t, s)) for the first equality g.

    Brackets come from sign changes on a uniform grid; each is refined by
    Brent's method to |f| <= tol.  Further equalities must vanish within
    tol at the root and inequalities must hold.
    """
    if V.n != 1:
        raise ValueError("fibers are computed for n = 1 systems")
    if not V.equalities:
        raise ValueError("the system needs at least one equality")
    a, b = float(t_window[0]), float(t_window[1])
    if not (math.isfinite(a) and math.isfinite(b)) or b <= a:
        raise WindowTooCoarse(f"t window {t_window} is empty or infinite")
    if grid < 2:
        raise WindowTooCoarse(f"grid {grid} cannot resolve sign changes")
    if max(abs(a), abs(b)) + abs(s) > EXP_LIMIT:
        raise Overflow("window leaves the double range")
    f = _fiber_fn(params, V, s)
    ts = np.linspace(a, b, grid + 1)
    vals = f(ts)
    roots: List[float] = []
    tol = params.tol
    for i in range(grid):
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            if not roots or roots[-1] != ts[i]:
                roots.append(float(ts[i]))
            continue
        if fb == 0.0:
            roots.append(float(ts[i + 1]))
            continue
        if (fa < 0) != (fb < 0):
            r = brentq(f, ts[i], ts[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
            roots.append(float(r))
    kept, res = [], []
    for r in roots:
        x, y = spiral_point(params, r, s)
        main = abs(V.eq_values((x, y))[0])
        rest = [abs(v) for v in V.eq_values((x, y))[1:]]
        if main > tol or any(v > math.sqrt(tol) for v in rest):
            continue
        if any(v <= 0 for v in V.gt_values((x, y))):
            continue
        kept.append(r)
        res.append(max([main] + rest))
    return FiberRoots(kept, s, (a, b), grid, res)


@dataclass
class ScanResult:
    intervals: List[Tuple[float, float]]
    hits: List[Tuple[float, int]]
    s_grid: List[Fraction]


def _rational_grid(lo, hi, grid: int) -> List[Fraction]:
    lo, hi = Fraction(str(lo)) if not isinstance(lo, Fraction) else lo, \
        Fraction(str(hi)) if not isinstance(hi, Fraction) else hi
    return [lo + (hi - lo) * j / grid for j in range(grid + 1)]


def projection_scan(params: SpiralParams, V: PlaneSystem, s_window=(0, 2), grid: int = 200,
                    t_window: Tuple[float, float] = (-0.1, 0.0), t_grid: int = 200) -> ScanResult:
    """Grid points s (in units of the first Q basis constant) with a nonempty fiber, merged into intervals."""
    unit = params.q_basis[0].value
    cs = _rational_grid(s_window[0], s_window[1], grid)
    hits = []
    for c in cs:
        s = float(c) * unit
        fr = lift_fiber_roots(params, V, s, t_window, t_grid)
        hits.append((c, fr.count))
    hits.sort()
    intervals = []
    start = prev = None
    for c, cnt in hits:
        if cnt:
            if start is None:
                start = c
            prev = c
        elif start is not None:
            intervals.append((start, prev))
            start = None
    if start is not None:
        intervals.append((start, prev))
    return ScanResult([(float(a) * unit, float(b) * unit) for a, b in intervals],
                      [(float(c) * unit, n) for c, n in hits], cs)


@dataclass
class Certificate:
    t: float
    s_coords: Tuple[Fraction, ...]
    s: float
    residual: float
    k: int
    verified: bool
    point: Tuple[float, float]
    q_basis: Tuple[QConst, ...]

    def lines(self) -> List[Tuple[str, str]]:
        out = []
        for c, q in zip(self.s_coords, self.q_basis):
            out.append((f"s_num[{q}]", str(c.numerator)))
            out.append((f"s_den[{q}]", str(c.denominator)))
        out += [("s", str(self.s_coords[0]) if len(self.s_coords) == 1 and self.q_basis[0].name == "1"
                 and self.q_basis[0].coef == 1 else " + ".join(f"{c}*({q})" for c, q in zip(self.s_coords, self.q_basis))),
                ("t", repr(self.t)), ("residual", f"{self.residual:.3e}"), ("k", str(self.k)),
                ("verified", "true" if self.verified else "false")]
        return out


def _certify_one(params: SpiralParams, V: PlaneSystem, s_window, grid, t_window, t_grid) -> Certificate:
    scan = projection_scan(params, V, s_window, grid, t_window, t_grid)
    unit = params.q_basis[0]
    hit = {c for c, (_, n) in zip(scan.s_grid, scan.hits) if n}
    for c in scan.s_grid:
        if c not in hit:
            continue
        s = float(c) * unit.value
        fr = lift_fiber_roots(params, V, s, t_window, t_grid)
        if not fr.count:
            continue
        j = min(range(fr.count), key=lambda i: (abs(fr.roots[i]), fr.roots[i]))
        t = fr.roots[j]
        coords = (c,) + (Fraction(0),) * (len(params.q_basis) - 1)
        pt = spiral_point(params, t, s)
        residual = max(abs(v) for v in V.eq_values(pt))
        m = green_member(params, pt)
        verified = (residual <= params.tol and m.member and m.s_coords == coords)
        return Certificate(t, coords, s, residual, m.k if m.member else 0, verified, pt, params.q_basis)
    raise NotFound("no fiber point found", {"s_window": tuple(map(str, s_window)), "grid": grid,
                                            "t_window": t_window, "t_grid": t_grid})


def ec_search(params: SpiralParams, V: PlaneSystem, s_window=(0, 2), grid: int = 200,
              t_window: Tuple[float, float] = (-0.1, 0.0), t_grid: int = 200) -> List[Certificate]:
    """A point of V on G^n: (t, s*) with s* in Q exact and residual <= tol.

    s* is the first grid point (rational multiple of the first Q basis
    constant) whose fiber is nonempty; t is the fiber root closest to 0.
    n = 2 is handled for product systems, one certificate per factor.
    """
    return [_certify_one(params, W, s_window, grid, t_window, t_grid) for W in V.product_factors()]


# ---------------------------------------------------------------------------
# relation ledger
# ---------------------------------------------------------------------------

SymLin = Dict[str, Fraction]


def _symlin(v) -> SymLin:
    """Normalize a symbolic linear form: dict name -> rational, or list of (rational, name)."""
    if isinstance(v, dict):
        items = v.items()
    elif isinstance(v, (list, tuple)) and all(isinstance(p, (list, tuple)) and len(p) == 2 for p in v):
        items = [(name, c) for c, name in v]
    else:
        raise NonSymbolicT(f"t = {v!r} is not a symbolic combination of named constants")
    out: SymLin = {}
    for name, c in items:
        if name != "pi/beta":
            constant_value(name)
        if isinstance(c, float):
            raise NonSymbolicT(f"coefficient {c!r} of {name} is a float; use an exact rational")
        c = Fraction(c)
        if c:
            out[name] = out.get(name, Fraction(0)) + c
    return out


@dataclass
class LedgerReport:
    md_exact: int
    relations: ExponentLattice
    ld_Q: int
    bound: str
    trd_note: str
    residuals: List[float]


def relation_ledger(params: SpiralParams, samples: Sequence[Tuple[object, Sequence]]) -> LedgerReport:
    """Exact multiplicative relations among constructed green points.

    Sample j is z_j = exp(eps*t_j + s_j) with t_j symbolic and s_j given by
    Q-coordinates.  z^m is torsion iff m.(t + s) = 0 and beta*(m.t) lies in
    2*pi*Q; the named constants are treated as Q-linearly independent and,
    unless beta is an exact rational, pi/beta as an independent symbol.
    """
    ts = [_symlin(t) for t, _ in samples]
    ss = []
    for _, sc in samples:
        if len(sc) != len(params.q_basis):
            raise ValueError("s coordinates do not match the Q basis")
        form: SymLin = {}
        for c, q in zip(sc, params.q_basis):
            c = Fraction(c)
            if c:
                form[q.name] = form.get(q.name, Fraction(0)) + c * q.coef
        ss.append(form)
    beta = params.beta_exact
    if beta is not None:
        for t in ts:
            if "pi/beta" in t:
                t["pi"] = t.get("pi", Fraction(0)) + t.pop("pi/beta") / beta
    names = sorted(set().union(*ts, *ss)) if samples else []
    cols: List[List[Fraction]] = []
    for name in names:
        cols.append([t.get(name, Fraction(0)) + s.get(name, Fraction(0)) for t, s in zip(ts, ss)])
    keep = "pi" if beta is not None else "pi/beta"
    for name in names:
        if name != keep:
            cols.append([t.get(name, Fraction(0)) for t in ts])
    n = len(samples)
    if cols:
        den = 1
        for col in cols:
            for x in col:
                den = den * x.denominator // math.gcd(den, x.denominator)
        M = IntMatrix([[int(col[j] * den) for col in cols] for j in range(n)], len(cols))
        ker = left_kernel(M)
    else:
        ker = IntMatrix.identity(n)
    # beta*(m.t) must be an integer multiple of 2*pi: a congruence on the kernel
    if beta is not None:
        angle = [sum((t.get("pi", Fraction(0)) * k for t, k in zip(ts, row)), Fraction(0)) * beta / 2
                 for row in ker.rows]
    else:
        angle = [sum((t.get("pi/beta", Fraction(0)) * k for t, k in zip(ts, row)), Fraction(0)) / 2
                 for row in ker.rows]
    if ker.nrows and any(a.denominator != 1 for a in angle):
        D = 1
        for a in angle:
            D = D * a.denominator // math.gcd(D, a.denominator)
        cong = left_kernel(IntMatrix([[int(a * D)] for a in angle] + [[D]], 1))
        coeffs = IntMatrix([r[:ker.nrows] for r in cong.rows], ker.nrows)
        rel = ExponentLattice(coeffs @ ker if coeffs.nrows else IntMatrix([], n), n)
    else:
        rel = ExponentLattice(ker, n)
    ld = _ld_q(params)
    residuals = []
    for m in rel.basis.rows:
        zr, zi = 1.0, 0.0
        for mj, (t, _), sc in zip(m, samples, [s for _, s in samples]):
            tv = _symlin_value(_symlin(t), params)
            x, y = spiral_point(params, mj * tv, mj * params.s_value([Fraction(c) for c in sc]))
            zr, zi = zr * x - zi * y, zr * y + zi * x
        residuals.append(math.hypot(zr - 1.0, zi))
    bound = f"delta >= -3*{ld} - trd(K)"
    note = ("recorded, not verified: trd of the numeric reals is not computable; the bound rests on the "
            "Schanuel-type conjecture for K = Q(beta*i), taken as an assumption")
    return LedgerReport(n - rel.rank, rel, ld, bound, note, residuals)


def _symlin_value(t: SymLin, params: SpiralParams) -> float:
    total = 0.0
    for name, c in t.items():
        v = math.pi / params.beta if name == "pi/beta" else constant_value(name)
        total += float(c) * v
    return total


def _ld_q(params: SpiralParams) -> int:
    """Q-linear dimension of the basis (named constants are independent; equal names collapse)."""
    return len({q.name for q in params.q_basis})
