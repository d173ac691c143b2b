"""Free amalgamation of configurations over a common strong selection."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .config.engine import engine_for
from .config.model import BoundedVerdict, Configuration, SubSelection
from .config.predim import DEFAULT_BOUND, delta, is_strong
from .config.search import iter_hnf
from .exactalg.intmat import IntMatrix


class NotStrong(ValueError):
    """X is not strong in one side of the amalgam."""

    def __init__(self, side: str, verdict: BoundedVerdict):
        super().__init__(f"X is not strong in {side}: witness {verdict.witness}")
        self.side = side
        self.verdict = verdict


class NameClash(ValueError):
    """The two sides disagree on the common part or on the base."""


@dataclass
class AmalgamResult:
    result: Configuration
    embed_Y: Dict[str, str]
    embed_Z: Dict[str, str]
    freshness: Dict[str, str]
    X: SubSelection
    y_greens: Tuple[str, ...]
    fresh: bool = True
    strong: Dict[str, BoundedVerdict] = field(default_factory=dict)

    def image(self, side: str) -> SubSelection:
        """The image of Y or Z as a selection of the result (points plus their greens)."""
        emb = self.embed_Y if side == "Y" else self.embed_Z
        return SubSelection.of(self.result, sorted(emb.values()))

    def x_image(self) -> SubSelection:
        words = [_move_word(w, self.y_greens, self.result, self.embed_Y) for w in self.X.words()]
        return SubSelection.of(self.result, [self.embed_Y[p] for p in self.X.points], words)


def _move_word(w, src_greens, target: Configuration, emb) -> List[int]:
    out = [0] * target.ngreens
    for k, gname in zip(w, src_greens):
        if k:
            out[target.green_index(emb[gname])] += k
    return out


def _fresh(taken, want: str) -> str:
    name, k = want, 1
    while name in taken:
        k += 1
        name = f"{want}_{k}"
    return name


def _support(config: Configuration, names) -> set:
    vs = set()
    for p in names:
        for f in config.coords(p):
            vs.update(config.transcendentals[i] for i in f.support_vars())
    return vs


def _check_common(X: SubSelection, Y: Configuration, Z: Configuration):
    for p in X.points:
        if p not in Z.points:
            raise NameClash(f"common point {p!r} is missing from Z")
        yc = Y.coords(p)
        zc = Z.coords(p)
        union = tuple(dict.fromkeys(Y.transcendentals + Z.transcendentals))
        if any(a.embed(union) != b.embed(union) for a, b in zip(yc, zc)):
            raise NameClash(f"common point {p!r} has different coordinates in Y and Z")
        if Y.is_green(p) != Z.is_green(p):
            raise NameClash(f"common point {p!r} is green on one side only")
    yb, zb = Y.base, Z.base
    if (yb is None) != (zb is None):
        raise NameClash("only one side has a base")
    if yb is not None and (yb.transcendentals != zb.transcendentals or set(yb.points) != set(zb.points)
                           or set(yb.greens) != set(zb.greens)):
        raise NameClash("the two sides have different bases")
    for w in X.words():
        for k, gname in zip(w, Y.greens):
            if k and gname not in X.points:
                raise NameClash("words of X must be supported on common greens")


def free_amalgam(X: SubSelection, Y: Configuration, Z: Configuration, B: int = DEFAULT_BOUND,
                 fresh: bool = True, check: bool = True) -> AmalgamResult:
    """Glue Y and Z along X with Z's remaining transcendentals renamed apart.

    X is a selection of Y whose points exist in Z with identical
    coordinates.  Its transcendental support must be algebraically
    determined by X (trd(X) equals the number of variables X uses), so that
    disjoint support realizes freeness over X.  fresh=False skips the
    renaming, which gives a deliberately non-free negative control.
    """
    _check_common(X, Y, Z)
    strong = {}
    if check:
        for side, cfg in (("Y", Y), ("Z", Z)):
            Xs = X if side == "Y" else _transport(X, Y, Z)
            v = is_strong(cfg, Xs, B)
            if v.violated:
                raise NotStrong(side, v)
            strong[side] = v
    shared = _support(Y, X.points) | set(Y.transcendentals[:Y.base_nvars])
    if fresh:
        xs = SubSelection.of(Y, X.points)
        nx = len(_support(Y, X.points))
        if engine_for(Y).trd(xs) != nx and nx:
            raise NameClash("X uses transcendentals it does not determine; freeness by disjoint support "
                            "needs trd(X) = number of X variables")
    taken = set(Y.transcendentals) | set(Y.points)
    freshness: Dict[str, str] = {}
    for t in Z.transcendentals:
        if t in shared:
            continue
        if fresh or t not in Y.transcendentals:
            new = _fresh(taken | set(Z.transcendentals), t + "'") if fresh else t
            freshness[t] = new
            taken.add(new)
    trans = Y.transcendentals + tuple(freshness[t] for t in Z.transcendentals if t in freshness
                                      and freshness[t] not in Y.transcendentals)
    embed_Y = {p: p for p in Y.points}
    embed_Z: Dict[str, str] = {}
    points = dict(Y.points)
    for p in Z.points:
        if p in X.points or (Z.base is not None and p in Z.base.points):
            embed_Z[p] = p
            continue
        new = _fresh(taken | set(Z.points), p) if p in taken else p
        taken.add(new)
        embed_Z[p] = new
        x, y = Z.coords(p)
        ren = tuple(freshness.get(t, t) for t in Z.transcendentals)
        points[new] = (x.rename(ren).embed(trans), y.rename(ren).embed(trans))
    greens = list(Y.greens) + [embed_Z[g] for g in Z.greens if embed_Z[g] not in Y.greens]
    result = Configuration(trans, points, greens, Y.base)
    return AmalgamResult(result, embed_Y, embed_Z, freshness, X, Y.greens, fresh, strong)


def _transport(X: SubSelection, Y: Configuration, Z: Configuration) -> SubSelection:
    """The selection X re-expressed over Z (same point names, words moved by green name)."""
    ident = {g: g for g in Y.greens}
    words = [_move_word(w, Y.greens, Z, ident) for w in X.words()]
    return SubSelection.of(Z, X.points, words)


@dataclass
class AmalgamReport:
    ok: bool
    checked: int
    failures: List[Tuple[List[int], int, int]]
    strong_Y: BoundedVerdict
    strong_Z: BoundedVerdict
    delta_identity: Tuple[int, int, int, int]


def verify_amalgam(a: AmalgamResult, B: int = DEFAULT_BOUND, Y: Optional[Configuration] = None,
                   Z: Optional[Configuration] = None) -> AmalgamReport:
    """Check delta(w/Z) = delta(y/X) for searched single words w = y*z, and both embeddings.

    y is the part of w on Y's greens, z the part on Z's new greens.  When Y
    and Z are passed, delta(W) = delta(Y) + delta(Z) - delta(X) is reported too.
    """
    W = a.result
    g = W.ngreens
    ygreens = set(a.embed_Y[gn] for gn in a.y_greens)
    Yimg = a.image("Y")
    Zimg = a.image("Z")
    Ximg = a.x_image()
    failures = []
    checked = 0
    for M in iter_hnf(g, B, 1, 1):
        w = list(M[0])
        y = [k if gn in ygreens else 0 for k, gn in zip(w, W.greens)]
        lhs = delta(W, SubSelection.of(W, [], [w]), Zimg)
        rhs = delta(W, SubSelection.of(W, [], [y]) if any(y) else SubSelection.empty(W), Ximg)
        checked += 1
        if lhs != rhs:
            failures.append((w, lhs, rhs))
    sY = is_strong(W, Yimg, B)
    sZ = is_strong(W, Zimg, B)
    dW = delta(W, SubSelection.everything(W))
    dY = delta(Y, SubSelection.everything(Y)) if Y is not None else None
    dZ = delta(Z, SubSelection.everything(Z)) if Z is not None else None
    dX = delta(W, Ximg)
    ok = not failures and not sY.violated and not sZ.violated
    if dY is not None and dZ is not None:
        ok = ok and dW == dY + dZ - dX
    return AmalgamReport(ok, checked, failures, sY, sZ, (dW, dY, dZ, dX))


def iterate_copies(X: SubSelection, Y: Configuration, k: int, B: int = DEFAULT_BOUND,
                   check: bool = True) -> Configuration:
    """k-fold free amalgam of Y with itself over X."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if check:
        v = is_strong(Y, X, B)
        if v.violated:
            raise NotStrong("Y", v)
    cur = Y
    for _ in range(k - 1):
        Xc = _transport(X, Y, cur)
        cur = free_amalgam(Xc, cur, Y, B, check=False).result
    return cur
