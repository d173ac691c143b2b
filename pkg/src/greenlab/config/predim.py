"""Predimension calculus: validation, trd, md, delta, strongness, hulls, d, Cl."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..exactalg.funmatrix import PRIME
from ..exactalg.intmat import IntMatrix
from ..torus import ExponentLattice, hull_member, saturate
from .engine import Engine, engine_for, int_rank_small
from .model import (AlgebraicGreen, BaseMismatch, BoundedVerdict, ConfigError, Configuration,
                    SubSelection, ZeroGreen)
from .search import iter_hnf, saturated_form

DEFAULT_BOUND = 3


class NonTermination(RuntimeError):
    """The hull iteration exceeded its cap."""


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    relation_lattice: ExponentLattice
    warnings: List[str] = field(default_factory=list)


def _is_identity_point(config: Configuration, name: str) -> bool:
    x, y = config.coords(name)
    return x == 1 and y.is_zero()


def _check_base(config: Configuration):
    base = config.base
    if base is None:
        return
    nb = base.nvars
    if config.transcendentals[:nb] != base.transcendentals:
        raise BaseMismatch("base transcendentals must be a prefix of the configuration's")
    for name in base.point_names:
        if name not in config.points:
            raise BaseMismatch(f"base point {name!r} is not a point of the configuration")
        bx, by = base.coords(name)
        x, y = config.coords(name)
        if bx.embed(config.transcendentals) != x or by.embed(config.transcendentals) != y:
            raise BaseMismatch(f"base point {name!r} has different coordinates in the configuration")
        for f in (x, y):
            if any(k >= nb for k in f.support_vars()):
                raise BaseMismatch(f"base point {name!r} uses a non-base transcendental")
    for gname in base.greens:
        if gname not in config.greens:
            raise BaseMismatch(f"base green {gname!r} is not green in the configuration")
    if base.base is not None:
        raise BaseMismatch("nested bases are not supported")


def validate(config: Configuration) -> ValidationReport:
    """Reject zero greens and algebraic greens; report the green relation lattice."""
    _check_base(config)
    warnings = []
    for name, (x, y) in config.points.items():
        if not (x.is_real() and y.is_real()):
            raise ConfigError(f"point {name!r} has non-rational coefficients")
    for gname in config.greens:
        if config.zhat(gname).is_zero():
            raise ZeroGreen(f"green {gname!r} is the zero point")
    eng = engine_for(config)
    K = eng.K()
    base_greens = set(config.base_greens())
    floor = eng.md_floor() if base_greens else None
    for gname in config.greens:
        x, y = config.coords(gname)
        if not (x.is_const() and y.is_const()) or _is_identity_point(config, gname):
            continue
        if gname in base_greens:
            warnings.append(f"green {gname!r} is algebraic (allowed inside the base)")
            continue
        if floor is not None:
            e = [0] * config.ngreens
            e[config.green_index(gname)] = 1
            if hull_member(e, floor):
                warnings.append(f"green {gname!r} is algebraic but lies in the hull of the base greens")
                continue
        c = config.zhat(gname).const_value()
        if c.is_torsion():
            raise AlgebraicGreen(f"green {gname!r} = ({x}, {y}) is a nontrivial root of unity; "
                                 "G is torsion-free")
        raise AlgebraicGreen(f"green {gname!r} = ({x}, {y}) is algebraic; delta of it is -1")
    return ValidationReport(K, warnings)


# ---------------------------------------------------------------------------
# basic quantities
# ---------------------------------------------------------------------------

def _sel(config: Configuration, pts) -> SubSelection:
    if isinstance(pts, SubSelection):
        return pts
    return SubSelection.of(config, pts)


def trd(config: Configuration, pts, over: Optional[SubSelection] = None) -> int:
    """Transcendence degree of the points (over `over` and the base)."""
    eng = engine_for(config)
    s = _sel(config, pts)
    if over is None:
        return eng.trd(s)
    return eng.trd(s.union(over)) - eng.trd(over)


def md_cl_green(config: Configuration, pts, relative_to_base: bool = True) -> int:
    """md(cl(pts) cap G), modulo the base greens when relative_to_base."""
    eng = engine_for(config)
    s = _sel(config, pts)
    if relative_to_base or config.base is None:
        return eng.md(s)
    K = eng.K()
    plain = saturate(ExponentLattice(eng.U(s.points).basis.stack(s.lattice.basis).stack(K.basis)))
    return plain.rank - K.rank


def delta(config: Configuration, pts, over: Optional[SubSelection] = None) -> int:
    """delta(pts), or the localized delta(pts / over) = delta(pts over) - delta(over)."""
    eng = engine_for(config)
    s = _sel(config, pts)
    if over is None:
        return eng.delta(s)
    return eng.delta(s.union(over)) - eng.delta(over)


# ---------------------------------------------------------------------------
# bounded search over green-word lattices
# ---------------------------------------------------------------------------

@dataclass
class Hit:
    witness: Tuple[Tuple[int, ...], ...]
    delta: int
    md_inc: int
    trd_inc: int
    order: int


class _Searcher:
    """Evaluates delta(L / S) for candidate word lattices L over a selection S."""

    def __init__(self, eng: Engine, S: SubSelection, extra_points: Sequence[str] = (),
                 within: Optional[ExponentLattice] = None):
        self.eng = eng
        self.S = S
        self.g = eng.g
        self.extra_points = tuple(extra_points)
        self.C = eng.complement(eng.hull_lattice(S)).rows
        self.Cw = eng.complement(within).rows if within is not None else None
        base_sel = S.add_points(self.extra_points)
        self.base_sel = base_sel
        self.S_combos = [eng.word_combo(w) for w in S.lattice.basis.rows]
        self.ech = eng.echelon(base_sel.points, self.S_combos)
        self.dl, self.dlc = eng.green_dlog_num(0)
        self._trd_base: Optional[int] = None
        self.GS = eng.hull_lattice(S)
        self._img = {}
        self._keys = {}

    def reduce_witness(self, sat):
        """Express the witness modulo the green hull of S (same delta, fewer redundant words)."""
        if self.GS.rank == 0:
            return sat
        joined = saturate(ExponentLattice(IntMatrix([list(r) for r in sat], self.g).stack(self.GS.basis)))
        return tuple(tuple(r) for r in _relative_basis(joined, self.GS))

    def image(self, m) -> Tuple[int, ...]:
        """m * C: the class of the word m modulo the hull of S."""
        out = self._img.get(m)
        if out is None:
            q = len(self.C[0]) if self.C and self.C[0] else 0
            out = tuple(sum(m[i] * self.C[i][j] for i in range(self.g)) for j in range(q))
            self._img[m] = out
        return out

    def md_inc(self, M) -> int:
        if not self.C or not self.C[0]:
            return 0
        return int_rank_small([self.image(m) for m in M])

    def span_key(self, M):
        """Canonical rational row space of M * C.

        trd and md increments over S depend only on span(M) + hull(S), which
        this identifies.
        """
        imgs = tuple(self.image(m) for m in M)
        key = self._keys.get(imgs)
        if key is None:
            key = self._keys[imgs] = self._span_key(imgs)
        return key

    def _span_key(self, imgs):
        q = len(imgs[0])
        r = int_rank_small(imgs)
        if r == 0:
            return ()
        if r == q:
            return ("full", q)
        if r == 1:
            v = next(u for u in imgs if any(u))
            g = 0
            for x in v:
                g = math.gcd(g, x)
            lead = next(x for x in v if x)
            g = g if lead > 0 else -g
            return (tuple(x // g for x in v),)
        return _rref_key(imgs)

    def inside(self, M) -> bool:
        if self.Cw is None:
            return True
        q = len(self.Cw[0]) if self.Cw else 0
        for m in M:
            for j in range(q):
                if sum(m[i] * self.Cw[i][j] for i in range(self.g)):
                    return False
        return True

    def trd_inc_lb(self, M) -> int:
        P = PRIME
        rows = []
        nf = len(self.eng.free)
        for m in M:
            r1 = [0] * nf
            r2 = [0] * nf
            for k, a, b in zip(m, self.dl, self.dlc):
                if k:
                    for j in range(nf):
                        r1[j] += k * a[j]
                        r2[j] += k * b[j]
            rows.append([x % P for x in r1])
            rows.append([x % P for x in r2])
        return self.ech.rank_increment(rows)

    def trd_inc_exact(self, M) -> int:
        eng = self.eng
        if self._trd_base is None:
            self._trd_base = eng.rank_of(self.base_sel.points, self.S_combos)
        combos = self.S_combos + [eng.word_combo(m) for m in M]
        return eng.rank_of(self.base_sel.points, combos) - self._trd_base

    def run(self, B: int, mode: str = "first", threshold: int = 0, md_override=None):
        """Scan candidates; a hit is a candidate with trd_inc - md_inc < threshold.

        mode "first" returns the first hit in enumeration order, "all" returns
        every hit.  md_override(M) replaces md_inc (used by the Cl test).
        """
        hits = []
        if self.g == 0:
            return hits
        seen = set()
        spans = set()
        for order, M in enumerate(iter_hnf(self.g, B)):
            if not self.inside(M):
                continue
            if md_override is None:
                key = self.span_key(M)
                if key in spans:
                    continue
                spans.add(key)
                mi = key[1] if key and key[0] == "full" else len(key)
            else:
                mi = md_override(M)
            if mi <= 0 and threshold <= 0:
                continue
            lb = self.trd_inc_lb(M)
            if lb - mi >= threshold:
                continue
            sat = saturated_form(M, self.g)
            if sat in seen:
                continue
            seen.add(sat)
            ti = self.trd_inc_exact(sat)
            d = ti - mi
            if d < threshold:
                hit = Hit(self.reduce_witness(sat), d, mi, ti, order)
                if mode == "first":
                    return [hit]
                hits.append(hit)
        return hits


def _rref_key(rows) -> Tuple[Tuple[Fraction, ...], ...]:
    A = [[Fraction(x) for x in r] for r in rows if any(r)]
    if not A:
        return ()
    nc = len(A[0])
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        A[r] = [x / p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    return tuple(tuple(row) for row in A[:r])


def _witness_matrix(rows, g) -> IntMatrix:
    return IntMatrix([list(r) for r in rows], g)


def is_strong(config: Configuration, X: SubSelection, B: int = DEFAULT_BOUND,
              within: Optional[SubSelection] = None) -> BoundedVerdict:
    """Search green-word tuples b (HNF height <= B) with delta(b/X) < 0.

    `within` restricts b to the green hull of a larger selection Y, giving
    the test for X <= Y.
    """
    eng = engine_for(config)
    wl = eng.hull_lattice(within) if within is not None else None
    hits = _Searcher(eng, X, within=wl).run(B, "first")
    if hits:
        h = hits[0]
        return BoundedVerdict.violation(B, _witness_matrix(h.witness, eng.g), delta=h.delta,
                                        md=h.md_inc, trd=h.trd_inc)
    return BoundedVerdict.certified(B)


def _pick(hits: List[Hit]) -> Hit:
    return min(hits, key=lambda h: (h.delta, h.md_inc, h.order))


def hull(config: Configuration, X: SubSelection, B: int = DEFAULT_BOUND,
         within: Optional[SubSelection] = None) -> Tuple[SubSelection, BoundedVerdict]:
    """Adjoin delta-deficient witnesses until no bounded witness remains.

    Each round adjoins the candidate of least delta(b/current), ties broken
    by smaller md increment and then enumeration order.
    """
    eng = engine_for(config)
    wl = eng.hull_lattice(within) if within is not None else None
    cur = X
    cap = eng.g + 1
    for _ in range(cap):
        hits = _Searcher(eng, cur, within=wl).run(B, "all")
        if not hits:
            return cur, BoundedVerdict.certified(B)
        best = _pick(hits)
        cur = cur.add_words(best.witness)
    raise NonTermination(f"hull did not stabilize after {cap} rounds")


def dim_d(config: Configuration, pts, B: int = DEFAULT_BOUND) -> Tuple[int, BoundedVerdict]:
    """d(pts) = delta of the hull of pts."""
    s = _sel(config, pts)
    h, verdict = hull(config, s, B)
    return delta(config, h), verdict


def cl_geom_member(config: Configuration, pt: str, over: SubSelection, B: int = DEFAULT_BOUND) -> BoundedVerdict:
    """Violated(witness a) when trd(a, pt / over) <= md(a / over) for a searched a.

    A violation means pt lies in Cl(over); certification means no such a was
    found up to the bound.  `over` is expected to be strong.
    """
    config.check_names([pt])
    eng = engine_for(config)
    g = eng.g
    if pt in over.points:
        return BoundedVerdict.violation(B, IntMatrix([], g), trd=0, md=0)
    # empty tuple a first
    t0 = trd(config, [pt], over)
    if t0 <= 0:
        return BoundedVerdict.violation(B, IntMatrix([], g), trd=t0, md=0)
    searcher = _Searcher(eng, over, extra_points=(pt,))
    hits = searcher.run(B, "first", threshold=1 - t0)
    if hits:
        h = hits[0]
        return BoundedVerdict.violation(B, _witness_matrix(h.witness, g), trd=t0 + h.trd_inc, md=h.md_inc)
    return BoundedVerdict.certified(B)


# ---------------------------------------------------------------------------
# minimal extensions
# ---------------------------------------------------------------------------

@dataclass
class Classification:
    kind: str  # prealgebraic | purely_transcendental | not_minimal | not_strong
    delta: Optional[int] = None
    witness: Optional[object] = None
    reason: str = ""
    bound: int = DEFAULT_BOUND


def _proper_intermediate(config, X: SubSelection, Y: SubSelection, B: int) -> Optional[SubSelection]:
    """A strong Z with X < Z < Y built as the hull (inside Y) of X plus one point of Y."""
    tY = trd(config, Y, X)
    eng = engine_for(config)
    mY = eng.md(Y.union(X)) - eng.md(X)
    starts = [X.add_points([p]) for p in Y.points if p not in X.points]
    starts += [X.add_words([w]) for w in _relative_basis(eng.hull_lattice(Y), eng.hull_lattice(X))]
    for start in starts:
        Z, _ = hull(config, start, B, within=Y)
        tz = eng.trd(Z) - eng.trd(X)
        mz = eng.md(Z.union(X)) - eng.md(X)
        if (tz, mz) != (tY, mY) and (tz, mz) != (0, 0):
            return Z
    return None


def classify_extension(config: Configuration, X: SubSelection, Y: SubSelection,
                       B: int = DEFAULT_BOUND) -> Classification:
    """Classify X <= Y as prealgebraic, purely transcendental, not minimal, or not strong."""
    eng = engine_for(config)
    Yf = Y.union(X)
    v = is_strong(config, X, B, within=Yf)
    if v.violated:
        return Classification("not_strong", witness=v.witness, reason="delta(b/X) < 0", bound=B)
    d = eng.delta(Yf) - eng.delta(X)
    t = eng.trd(Yf) - eng.trd(X)
    m = eng.md(Yf) - eng.md(X)
    if t == 0 and m == 0:
        return Classification("not_minimal", d, None, "trivial extension: Y is algebraic over X", B)
    if d < 0:
        rel = _relative_basis(eng.hull_lattice(Yf), eng.hull_lattice(X))
        return Classification("not_strong", d, IntMatrix(rel, eng.g), "delta(Y/X) < 0 beyond the search bound", B)
    if d == 0:
        # a green cl-basis of G^Y over G^X
        GY = eng.hull_lattice(Yf)
        GX = eng.hull_lattice(X)
        basis = _relative_basis(GY, GX)
        Xa = X.add_words(basis) if basis else X
        ta = eng.trd(Xa) - eng.trd(X)
        if ta != m:
            return Classification("not_minimal", d, Xa, "green basis is not algebraically independent over X", B)
        if eng.trd(Yf) != eng.trd(Xa):
            return Classification("not_minimal", d, Xa, "Y is not generated over X by its green basis", B)
        # intermediate extension of delta 0 generated by fewer greens
        hits = _Searcher(eng, X, within=GY).run(B, "all", threshold=1)
        for h in hits:
            if 0 < h.md_inc < m and h.delta == 0:
                Z = X.add_words(h.witness)
                return Classification("not_minimal", d, Z, "intermediate prealgebraic extension", B)
        return Classification("prealgebraic", d, Xa, "", B)
    if d == 1 and m == 0 and t == 1:
        return Classification("purely_transcendental", d, None, "", B)
    Z = _proper_intermediate(config, X, Yf, B)
    reason = "delta(Y/X) >= 2" if d >= 2 else "delta(Y/X) = 1 but G^Y != G^X"
    return Classification("not_minimal", d, Z, reason, B)


def _relative_basis(GY: ExponentLattice, GX: ExponentLattice) -> List[List[int]]:
    """Rows of GY's basis completing GX to a Q-basis of GY."""
    from ..exactalg.intmat import rank as irank
    chosen: List[List[int]] = []
    cur = [list(r) for r in GX.basis.rows]
    r0 = len(cur)
    for v in GY.basis.rows:
        trial = cur + [list(v)]
        if irank(IntMatrix(trial, GY.ambient_n)) > r0 + len(chosen):
            chosen.append(list(v))
            cur = trial
    return chosen
