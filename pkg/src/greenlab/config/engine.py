"""Cached trd / md calculator attached to one configuration.

trd of a selection is the rank of a Jacobian.  A point contributes the
gradients of x and y; a green word w contributes sum_j w_j dlog(z_j) and the
same for the conjugates (the real and imaginary parts of z^w span the same
space as z^w and its conjugate).  In base-relative mode only the columns of
non-base transcendentals are kept, which computes trd over the base field.

md uses exponent vectors: every nonzero z is written over a coprime
polynomial basis plus Gaussian-prime valuations of its constant, so a word
is torsion exactly when its vector vanishes.
"""

from __future__ import annotations

import random
import weakref
from typing import Dict, List, Optional, Sequence, Tuple

from ..exactalg.factor import DEFAULT_TRIAL_BOUND, coprime_basis, valuation_matrix
from ..exactalg.funmatrix import PRIME, SQRT_M1, FunMatrix, ModEchelon, rank_exact
from ..exactalg.intmat import IntMatrix, left_kernel, rank as int_rank, right_kernel
from ..exactalg.poly import DivisionByZero, MultiPoly, RationalFunction
from ..torus import ExponentLattice, ZeroCoordinate, saturate
from .model import Configuration, SubSelection

Combo = Tuple[Tuple[str, int], ...]


def int_rank_small(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of a small integer matrix (fraction-free elimination)."""
    A = [list(r) for r in rows if any(r)]
    if not A:
        return 0
    nc = len(A[0])
    r = 0
    for c in range(nc):
        piv = None
        for i in range(r, len(A)):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pr = A[r]
        p = pr[c]
        for i in range(r + 1, len(A)):
            f = A[i][c]
            if f:
                A[i] = [a * p - f * b for a, b in zip(A[i], pr)]
        r += 1
        if r == len(A):
            break
    return r


class Engine:
    """Exact trd and md queries for one configuration, with caching."""

    NPOINTS = 2

    def __init__(self, config: Configuration, seed: int = 0, trial_bound: int = DEFAULT_TRIAL_BOUND):
        self.c = config
        self.seed = seed
        self.trial_bound = trial_bound
        self.nb = config.base_nvars
        self.free = list(range(self.nb, config.nvars))
        self.g = config.ngreens
        self._phi: Optional[Dict[str, Tuple[int, ...]]] = None
        self._U: Dict[frozenset, ExponentLattice] = {}
        self._trd: Dict[tuple, int] = {}
        self._grad_exact: Dict[str, List[List[RationalFunction]]] = {}
        self._dlog_exact: Dict[str, List[List[RationalFunction]]] = {}
        self._num: List[Dict[tuple, List[int]]] = [dict() for _ in range(self.NPOINTS)]
        rng = random.Random(seed * 7919 + 17)
        self._points = [[rng.randrange(2, PRIME - 1) for _ in range(config.nvars)]
                        for _ in range(self.NPOINTS)]

    # ------------------------------------------------------------------
    # multiplicative side
    # ------------------------------------------------------------------
    def phi(self) -> Dict[str, Tuple[int, ...]]:
        """Exponent vector of every point with nonzero z."""
        if self._phi is None:
            names = [n for n in self.c.point_names if not self.c.zhat(n).is_zero()]
            polys = []
            for n in names:
                z = self.c.zhat(n)
                polys.extend([z.num, z.den])
            basis, exps, consts = coprime_basis(polys)
            cvals = []
            for k in range(len(names)):
                cvals.append(consts[2 * k] / consts[2 * k + 1])
            vm, _ = valuation_matrix(cvals, self.trial_bound) if cvals else (IntMatrix([], 0), [])
            out = {}
            for k, n in enumerate(names):
                pe = tuple(a - b for a, b in zip(exps.rows[2 * k], exps.rows[2 * k + 1]))
                out[n] = pe + tuple(vm.rows[k]) if vm.ncols else pe
            self._phi = out
            self.phi_width = len(basis) + vm.ncols
        return self._phi

    def green_phi(self) -> IntMatrix:
        phi = self.phi()
        for gname in self.c.greens:
            if gname not in phi:
                raise ZeroCoordinate(f"green {gname!r} has z = 0")
        return IntMatrix([phi[gname] for gname in self.c.greens], self.phi_width)

    def U(self, points: Sequence[str]) -> ExponentLattice:
        """Green words w whose z^w lies in the divisible hull of the given points."""
        key = frozenset(points)
        lat = self._U.get(key)
        if lat is not None:
            return lat
        phi = self.phi()
        G = self.green_phi()
        prow = [phi[p] for p in sorted(key) if p in phi]
        g = self.g
        if self.phi_width == 0:
            lat = ExponentLattice.full(g)
        else:
            stacked = IntMatrix(list(G.rows) + prow, self.phi_width)
            ker = left_kernel(stacked)
            lat = ExponentLattice(IntMatrix([r[:g] for r in ker.rows], g))
        self._U[key] = lat
        return lat

    def K(self) -> ExponentLattice:
        """Words that are torsion (relation lattice among the greens)."""
        return self.U(())

    def base_lattice(self) -> ExponentLattice:
        g = self.g
        rows = []
        for b in self.c.base_greens():
            v = [0] * g
            v[self.c.green_index(b)] = 1
            rows.append(v)
        return ExponentLattice(IntMatrix(rows, g))

    def md_floor(self) -> ExponentLattice:
        """Saturated lattice quotiented out by md: K, plus base greens in base mode."""
        if not hasattr(self, "_md_floor"):
            self._md_floor = saturate(ExponentLattice(self.K().basis.stack(self.base_lattice().basis)))
        return self._md_floor

    def hull_lattice(self, sel: SubSelection) -> ExponentLattice:
        """Saturated lattice of green words in cl(sel) times the base greens."""
        U = self.U(sel.points)
        rows = U.basis.stack(sel.lattice.basis).stack(self.md_floor().basis)
        return saturate(ExponentLattice(rows))

    def md(self, sel: SubSelection) -> int:
        return self.hull_lattice(sel).rank - self.md_floor().rank

    def complement(self, lat: ExponentLattice) -> IntMatrix:
        """Integer matrix C (g x q) with v in span(lat) iff v*C = 0."""
        g = self.g
        if lat.rank == 0:
            return IntMatrix.identity(g)
        ker = right_kernel(lat.basis)
        return ker.transpose() if ker.nrows else IntMatrix([[] for _ in range(g)], 0)

    # ------------------------------------------------------------------
    # transcendence side
    # ------------------------------------------------------------------
    def _grad_rows_exact(self, name: str) -> List[List[RationalFunction]]:
        rows = self._grad_exact.get(name)
        if rows is None:
            x, y = self.c.coords(name)
            rows = [[x.partial(j) for j in self.free], [y.partial(j) for j in self.free]]
            self._grad_exact[name] = rows
        return rows

    def _dlog_rows_exact(self, name: str) -> List[List[RationalFunction]]:
        rows = self._dlog_exact.get(name)
        if rows is None:
            z = self.c.zhat(name)
            if z.is_zero():
                raise ZeroCoordinate(f"point {name!r} has z = 0")
            zc = self.c.zhat_conj(name)
            rows = [[z.partial(j) / z for j in self.free], [zc.partial(j) / zc for j in self.free]]
            self._dlog_exact[name] = rows
        return rows

    def _eval_rf_mod(self, f: RationalFunction, e: int) -> int:
        return f.eval_mod(self._points[e], PRIME, SQRT_M1)

    def _grad_rows_num(self, name: str, e: int) -> List[List[int]]:
        key = ("grad", name)
        rows = self._num[e].get(key)
        if rows is None:
            pt = self._points[e]
            rows = []
            for f in self.c.coords(name):
                n0 = f.num.eval_mod(pt, PRIME, SQRT_M1)
                d0 = f.den.eval_mod(pt, PRIME, SQRT_M1)
                if d0 == 0:
                    raise DivisionByZero("unlucky evaluation point")
                dinv2 = pow(d0 * d0 % PRIME, -1, PRIME)
                row = []
                for j in self.free:
                    dn = f.num.diff(j).eval_mod(pt, PRIME, SQRT_M1)
                    dd = f.den.diff(j).eval_mod(pt, PRIME, SQRT_M1)
                    row.append((dn * d0 - n0 * dd) * dinv2 % PRIME)
                rows.append(row)
            self._num[e][key] = rows
        return rows

    def _dlog_rows_num(self, name: str, e: int) -> List[List[int]]:
        key = ("dlog", name)
        rows = self._num[e].get(key)
        if rows is None:
            pt = self._points[e]
            rows = []
            for f in (self.c.zhat(name), self.c.zhat_conj(name)):
                if f.is_zero():
                    raise ZeroCoordinate(f"point {name!r} has z = 0")
                n0 = f.num.eval_mod(pt, PRIME, SQRT_M1)
                d0 = f.den.eval_mod(pt, PRIME, SQRT_M1)
                if n0 == 0 or d0 == 0:
                    raise DivisionByZero("unlucky evaluation point")
                ni, di = pow(n0, -1, PRIME), pow(d0, -1, PRIME)
                row = []
                for j in self.free:
                    dn = f.num.diff(j).eval_mod(pt, PRIME, SQRT_M1)
                    dd = f.den.diff(j).eval_mod(pt, PRIME, SQRT_M1)
                    row.append((dn * ni - dd * di) % PRIME)
                rows.append(row)
            self._num[e][key] = rows
        return rows

    def green_dlog_num(self, e: int = 0) -> Tuple[List[List[int]], List[List[int]]]:
        """Per-green dlog rows mod p: (rows for z, rows for conj z)."""
        dl, dlc = [], []
        for gname in self.c.greens:
            a, b = self._dlog_rows_num(gname, e)
            dl.append(a)
            dlc.append(b)
        return dl, dlc

    def combo_rows_num(self, combo: Combo, e: int = 0) -> List[List[int]]:
        nf = len(self.free)
        r1 = [0] * nf
        r2 = [0] * nf
        for name, k in combo:
            if not k:
                continue
            a, b = self._dlog_rows_num(name, e)
            r1 = [(u + k * v) % PRIME for u, v in zip(r1, a)]
            r2 = [(u + k * v) % PRIME for u, v in zip(r2, b)]
        return [r1, r2]

    def combo_rows_exact(self, combo: Combo) -> List[List[RationalFunction]]:
        """The two dlog rows of a combination, each scaled by a nonzero polynomial.

        Scaling keeps the row space; clearing denominators by their plain
        product avoids a multivariate gcd per summed entry.
        """
        terms = [(name, k) for name, k in combo if k]
        if len(terms) == 1:
            name, k = terms[0]
            return [[v * k for v in r] for r in self._dlog_rows_exact(name)]
        nf = len(self.free)
        out = []
        for side in range(2):
            rows = [(k, self._dlog_rows_exact(name)[side]) for name, k in terms]
            dens = []
            for _, r in rows:
                for v in r:
                    if not v.den.is_one() and v.den not in dens:
                        dens.append(v.den)
            zero = MultiPoly.const(self.c.transcendentals, 0)
            acc = [zero] * nf
            for k, r in rows:
                for i, v in enumerate(r):
                    if v.is_zero():
                        continue
                    term = v.num.scale(k)
                    for d in dens:
                        if d != v.den:
                            term = term * d
                    acc[i] = acc[i] + term
            out.append([RationalFunction.from_poly(a) for a in acc])
        return out

    def word_combo(self, w: Sequence[int]) -> Combo:
        return tuple((gname, int(k)) for gname, k in zip(self.c.greens, w) if k)

    def rows_num(self, points: Sequence[str], combos: Sequence[Combo], e: int = 0) -> List[List[int]]:
        rows = []
        for p in points:
            rows.extend(self._grad_rows_num(p, e))
        for cb in combos:
            rows.extend(self.combo_rows_num(cb, e))
        return rows

    def rows_exact(self, points: Sequence[str], combos: Sequence[Combo]) -> List[List[RationalFunction]]:
        rows = []
        for p in points:
            rows.extend(self._grad_rows_exact(p))
        for cb in combos:
            rows.extend(self.combo_rows_exact(cb))
        return rows

    def echelon(self, points: Sequence[str], combos: Sequence[Combo], e: int = 0) -> ModEchelon:
        ech = ModEchelon()
        for r in self.rows_num(points, combos, e):
            ech.add(r)
        return ech

    def rank_lb(self, points: Sequence[str], combos: Sequence[Combo]) -> int:
        best = 0
        for e in range(self.NPOINTS):
            try:
                best = max(best, self.echelon(points, combos, e).rank)
            except DivisionByZero:
                continue
        return best

    def rank_of(self, points: Sequence[str], combos: Sequence[Combo]) -> int:
        """Exact Jacobian rank of the rows of the given points and dlog combinations."""
        points = tuple(sorted(set(points)))
        # the dlog rows of a selected point lie in the span of its gradient rows
        pset = set(points)
        combos = tuple(sorted(set(cb for cb in (tuple((n, k) for n, k in cb if n not in pset)
                                                  for cb in combos) if cb)))
        key = (points, combos)
        r = self._trd.get(key)
        if r is None:
            nf = len(self.free)
            blocks = self._blocks(points, combos) if nf else []
            if nf == 0 or not blocks:
                r = 0
            elif len(blocks) > 1:
                r = sum(self.rank_of(bp, bc) for bp, bc in blocks)
            else:
                lb = self.rank_lb(points, combos)
                if lb == nf:
                    r = lb
                else:
                    rows = self.rows_exact(points, combos)
                    r = rank_exact(FunMatrix(rows, self.c.transcendentals, nf), seed=self.seed, lower=lb)
            self._trd[key] = r
        return r

    def _support(self, name: str) -> frozenset:
        sup = getattr(self, "_sup", None)
        if sup is None:
            sup = self._sup = {}
        out = sup.get(name)
        if out is None:
            out = frozenset(i for f in self.c.coords(name) for i in f.support_vars() if i >= self.nb)
            sup[name] = out
        return out

    def _blocks(self, points, combos):
        """Split rows into groups with pairwise disjoint variable support."""
        items = [((p,), ()) for p in points] + [((), (cb,)) for cb in combos]
        sups = [self._support(p) for p in points] + \
               [frozenset().union(*(self._support(n) for n, _ in cb)) for cb in combos]
        groups: List[List[int]] = []
        gsup: List[set] = []
        for i, s in enumerate(sups):
            hit = [k for k, gs in enumerate(gsup) if gs & s]
            merged = [i] + [j for k in hit for j in groups[k]]
            msup = set(s).union(*(gsup[k] for k in hit))
            for k in reversed(hit):
                del groups[k]
                del gsup[k]
            groups.append(merged)
            gsup.append(msup)
        out = []
        for g, s in zip(groups, gsup):
            if not s:
                continue
            out.append((tuple(p for i in g for p in items[i][0]), tuple(c for i in g for c in items[i][1])))
        return out

    def trd(self, sel: SubSelection) -> int:
        combos = [self.word_combo(w) for w in sel.lattice.basis.rows]
        return self.rank_of(sel.points, combos)

    def delta(self, sel: SubSelection) -> int:
        return self.trd(sel) - self.md(sel)


_ENGINES: "weakref.WeakKeyDictionary[Configuration, Dict]" = weakref.WeakKeyDictionary()


def engine_for(config: Configuration, seed: int = 0) -> Engine:
    per = _ENGINES.get(config)
    if per is None:
        per = {}
        _ENGINES[config] = per
    eng = per.get(seed)
    if eng is None:
        eng = Engine(config, seed)
        per[seed] = eng
    return eng
