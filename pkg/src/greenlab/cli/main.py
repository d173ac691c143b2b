"""Command line interface: `greenlab <subcommand> [file] [options]`.

Output is a block of `key = value` lines (or `key<TAB>value` with
--format tsv).  Exit codes: 0 result (including violated verdicts), 2 parse
error, 3 validation error, 4 operation precondition, 5 resource bound.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import re
import sys
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .. import amalgam, rotund, spiral
from ..config import predim
from ..config.model import ConfigError, Configuration, SubSelection, UnknownName
from ..exactalg.factor import FactorizationBoundExceeded
from ..exactalg.gaussian import GaussianRational
from ..exactalg.poly import MultiPoly
from ..torus import LatticeError, ZeroCoordinate
from .parser import ConfigDocument, ParseError, parse_config
from .printer import print_config

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_PRECONDITION, EXIT_RESOURCE = 0, 2, 3, 4, 5


class UsageError(ValueError):
    """A command line argument violates an operation precondition."""


class Output:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: List[str] = []

    def __call__(self, key: str, value):
        if isinstance(value, bool):
            value = "true" if value else "false"
        sep = "\t" if self.fmt == "tsv" else " = "
        self.lines.append(f"{key}{sep}{value}")

    def block(self, key: str, text: str):
        for line in text.rstrip("\n").split("\n"):
            self(key, line)

    def text(self) -> str:
        return "\n".join(self.lines) + ("\n" if self.lines else "")


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def _load(path: str) -> ConfigDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    return parse_config(text)


def _names(s: Optional[str]) -> List[str]:
    if not s:
        return []
    return [x.strip() for x in s.split(",") if x.strip()]


def _rows(s: Optional[str]) -> List[List[int]]:
    if not s:
        return []
    out = []
    for part in s.split(";"):
        part = part.strip().strip("[]")
        if part:
            try:
                out.append([int(x) for x in part.replace(",", " ").split()])
            except ValueError:
                raise UsageError(f"cannot read integer row {part!r}") from None
    return out


def _selection(doc: ConfigDocument, name: Optional[str], points: Optional[str], words: Optional[str],
               what: str = "selection") -> SubSelection:
    if name:
        if name not in doc.selections:
            raise UsageError(f"unknown {what} {name!r}")
        sel = doc.selections[name]
        extra_pts, extra_w = _names(points), _rows(words)
        if extra_pts:
            sel = sel.add_points(extra_pts)
        if extra_w:
            sel = sel.add_words(extra_w)
        return sel
    return SubSelection.of(doc.config, _names(points), _rows(words))


def _window(s: str, what: str) -> Tuple[float, float]:
    try:
        a, b = (float(x) for x in s.split(","))
    except ValueError:
        raise UsageError(f"{what} must be 'lo,hi'") from None
    return a, b


def _fraction_window(s: str, what: str):
    try:
        a, b = (Fraction(x.strip()) for x in s.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{what} must be 'lo,hi' with rational ends") from None
    return a, b


def _kwindow(s: str) -> Tuple[int, int]:
    try:
        if "," in s:
            a, b = (int(x) for x in s.split(","))
            return a, b
        k = int(s)
    except ValueError:
        raise UsageError("--kwindow is an integer K (meaning -K..K) or 'lo,hi'") from None
    return -abs(k), abs(k)


def _qbasis(s: Optional[str]):
    if not s:
        return None
    out = []
    for tok in s.split():
        m = re.fullmatch(r"(?:(-?\d+(?:/\d+)?)\*)?(1|pi|ln\d+|-?\d+(?:/\d+)?)", tok)
        if not m:
            raise UsageError(f"cannot read Q basis constant {tok!r}")
        coef, name = m.group(1), m.group(2)
        if re.fullmatch(r"-?\d+(?:/\d+)?", name) and coef is None:
            out.append((Fraction(name), "1"))
        else:
            out.append((Fraction(coef) if coef else Fraction(1), name))
    return out


def _beta(text):
    """A rational number, or a rational multiple of pi such as 2*pi (kept as a float)."""
    if not isinstance(text, str):
        return text
    m = re.fullmatch(r"\s*(?:(-?\d+(?:/\d+)?)\s*\*\s*)?pi\s*", text)
    if m:
        return float(Fraction(m.group(1) or 1)) * math.pi
    try:
        Fraction(text)
    except ValueError:
        raise UsageError(f"cannot read beta {text!r}; use a rational, a decimal or <rational>*pi")
    return text


def _params(args, doc: Optional[ConfigDocument] = None) -> spiral.SpiralParams:
    beta = args.beta
    qb = _qbasis(args.qbasis)
    if doc is not None and doc.spiral is not None:
        if beta is None:
            beta = doc.spiral_beta_text
        if qb is None:
            qb = [(q.coef, q.name) for q in doc.spiral.q_basis]
    if beta is None:
        raise UsageError("--beta is required (or a spiral block in the file)")
    return spiral.SpiralParams.make(_beta(beta), qb, k_window=_kwindow(args.kwindow), denom_bound=args.denom_bound,
                                    tol=args.tol)


def _system(args, doc: Optional[ConfigDocument]) -> spiral.PlaneSystem:
    if args.circle:
        cx, r = args.circle
        return spiral.PlaneSystem.circle(Fraction(cx), Fraction(r))
    if args.eq:
        text = "system V { " + "; ".join(f"eq {e}" for e in args.eq) + \
               "".join(f"; gt {g}" for g in (args.gt or [])) + " }"
        return parse_config(text).systems["V"]
    if doc is None:
        raise UsageError("give --circle CX R, --eq EXPR, or a file with --system NAME")
    if not doc.systems:
        raise UsageError("the file defines no system")
    name = args.system or next(iter(doc.systems))
    if name not in doc.systems:
        raise UsageError(f"unknown system {name!r}")
    return doc.systems[name]


def _verdict(out: Output, v, key: str = "verdict"):
    if v.violated:
        out(key, "violated")
        out("witness", v.witness)
    else:
        out(key, "certified_up_to_bound")
    out("bound", v.bound)


def _float(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args, out):
    doc = _load(args.file)
    rep = predim.validate(doc.config)
    out("status", "valid")
    out("points", len(doc.config.points))
    out("greens", doc.config.ngreens)
    out("relation_lattice", rep.relation_lattice.basis)
    for w in rep.warnings:
        out("warning", w)


def _sel_args(args, doc):
    return _selection(doc, args.selection, args.points, args.words)


def _over(args, doc):
    if args.over is None and args.over_points is None:
        return None
    return _selection(doc, args.over, args.over_points, None, "selection for --over")


def cmd_delta(args, out):
    doc = _load(args.file)
    predim.validate(doc.config)
    out("delta", predim.delta(doc.config, _sel_args(args, doc), _over(args, doc)))


def cmd_trd(args, out):
    doc = _load(args.file)
    predim.validate(doc.config)
    out("trd", predim.trd(doc.config, _sel_args(args, doc), _over(args, doc)))


def cmd_md(args, out):
    doc = _load(args.file)
    predim.validate(doc.config)
    out("md", predim.md_cl_green(doc.config, _sel_args(args, doc), relative_to_base=not args.absolute))


def _within(args, doc):
    if args.within is None and args.within_points is None:
        return None
    return _selection(doc, args.within, args.within_points, None, "selection for --within")


def cmd_strong(args, out):
    doc = _load(args.file)
    predim.validate(doc.config)
    v = predim.is_strong(doc.config, _sel_args(args, doc), args.bound, _within(args, doc))
    _verdict(out, v)


def cmd_hull(args, out):
    doc = _load(args.file)
    predim.validate(doc.config)
    h, v = predim.hull(doc.config, _sel_args(args, doc), args.bound, _within(args, doc))
    out("points", ",".join(h.points))
    out("words", h.lattice.basis)
    out("delta", predim.delta(doc.config, h))
    _verdict(out, v)


def cmd_dim(args, out):
    doc = _load(args.file)
    predim.validate(doc.config)
    d, v = predim.dim_d(doc.config, _sel_args(args, doc), args.bound)
    out("d", d)
    _verdict(out, v)


def cmd_clmember(args, out):
    doc = _load(args.file)
    predim.validate(doc.config)
    over = _over(args, doc) or SubSelection.empty(doc.config)
    v = predim.cl_geom_member(doc.config, args.point, over, args.bound)
    out("in_cl", "true" if v.violated else "not_found_up_to_bound")
    _verdict(out, v)


def cmd_classify(args, out):
    doc = _load(args.file)
    predim.validate(doc.config)
    X = _selection(doc, args.x, args.x_points, None, "selection for --x")
    Y = _selection(doc, args.y, args.y_points, None, "selection for --y")
    c = predim.classify_extension(doc.config, X, Y, args.bound)
    out("kind", c.kind)
    if c.delta is not None:
        out("delta", c.delta)
    if c.reason:
        out("reason", c.reason)
    if c.witness is not None:
        out("witness", c.witness if not isinstance(c.witness, SubSelection)
            else f"points({','.join(c.witness.points)}) words{c.witness.lattice.basis}")
    out("bound", c.bound)


def cmd_rotund(args, out):
    doc = _load(args.file)
    pts = _names(args.points)
    rep = rotund.is_rotund(doc.config, pts, args.bound, _over(args, doc))
    first, second = (rep.strict_verdict, rep.verdict) if args.strict else (rep.verdict, rep.strict_verdict)
    _verdict(out, first)
    out("strict" if not args.strict else "non_strict", "violated" if second.violated else "certified_up_to_bound")
    if second.violated:
        out("strict_witness" if not args.strict else "non_strict_witness", second.witness)
    out("r_V", rep.r_V)
    out("hat_dim", rep.hat_dim)
    out("dim", rep.dim)


def _coeffs(s: Optional[str]):
    if not s:
        return None
    rows = []
    for part in s.split(";"):
        part = part.strip().strip("[]")
        row = []
        for tok in part.replace(",", " ").split():
            m = re.fullmatch(r"(-?\d+(?:/\d+)?)(?:([+-]\d+(?:/\d+)?)i)?|(-?\d+(?:/\d+)?)i", tok)
            if not m:
                raise UsageError(f"cannot read coefficient {tok!r} (use a, a/b, a+bi or bi)")
            if m.group(3):
                row.append(GaussianRational(0, Fraction(m.group(3))))
            else:
                row.append(GaussianRational(Fraction(m.group(1)), Fraction(m.group(2) or 0)))
        rows.append(row)
    return rows


def cmd_hyperplane(args, out):
    base = _load(args.file).config if args.file else Configuration((), {})
    ext, loc = rotund.gen_hyperplane(base, args.n, _coeffs(args.coeffs), args.prefix, args.green)
    rep = rotund.is_rotund(ext, loc.witness, args.bound)
    out("locus", ",".join(loc.witness))
    out("dim", rep.dim)
    _verdict(out, rep.strict_verdict, "strict_verdict")
    text = print_config(ext)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        out("written", args.out)
    else:
        out.block("config", text)


def cmd_phi_check(args, out):
    doc = _load(args.file)
    predim.validate(doc.config)
    mu = []
    for name in _names(args.mu):
        if name not in doc.mu:
            raise UsageError(f"unknown subgroup {name!r}")
        mu.append(doc.mu[name])
    cosets = []
    mu_names = _names(args.mu)
    for name in _names(args.cosets):
        if name not in doc.cosets:
            raise UsageError(f"unknown coset {name!r}")
        sub, c = doc.cosets[name]
        cosets.append(c)
    v = rotund.check_phi_V(doc.config, _names(args.points), mu, cosets,
                           "base-relative" if args.base_relative else "base-free")
    out("status", v.status)
    out("reason", v.reason)
    out("dim", v.dim)
    out("r_V", v.r_V)
    out("fiber_dim", v.fiber_dim)
    if v.witness is not None:
        idx = v.witness[0]
        out("witness", mu_names[idx] if idx < len(mu_names) else idx)


def cmd_amalgamate(args, out):
    dy, dz = _load(args.file), _load(args.other)
    for d in (dy, dz):
        predim.validate(d.config)
    X = _selection(dy, args.x, args.x_points, args.x_words, "selection for --x")
    try:
        res = amalgam.free_amalgam(X, dy.config, dz.config, args.bound, fresh=not args.no_fresh)
    except amalgam.NotStrong as e:
        out("status", "not_strong")
        out("side", e.side)
        _verdict(out, e.verdict)
        return EXIT_PRECONDITION
    rep = amalgam.verify_amalgam(res, args.bound, dy.config, dz.config)
    out("status", "ok" if rep.ok else "identity_failed")
    out("greens", res.result.ngreens)
    out("renamed", ",".join(f"{a}->{b}" for a, b in res.freshness.items()) or "-")
    out("words_checked", rep.checked)
    out("identity_failures", len(rep.failures))
    for w, lhs, rhs in rep.failures[:5]:
        out("failure", f"[{' '.join(map(str, w))}] delta(w/Z) = {lhs} delta(y/X) = {rhs}")
    dW, dY, dZ, dX = rep.delta_identity
    out("delta", f"{dW} = {dY} + {dZ} - {dX}")
    _verdict(out, rep.strong_Y, "strong_Y")
    _verdict(out, rep.strong_Z, "strong_Z")
    text = print_config(res.result)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        out("written", args.out)
    else:
        out.block("config", text)


def cmd_copies(args, out):
    doc = _load(args.file)
    predim.validate(doc.config)
    X = _selection(doc, args.x, args.x_points, args.x_words, "selection for --x")
    W = amalgam.iterate_copies(X, doc.config, args.k, args.bound)
    allW = SubSelection.everything(W)
    out("greens", W.ngreens)
    out("md", predim.md_cl_green(W, allW))
    out("delta", predim.delta(W, allW))
    out.block("config", print_config(W))


def cmd_spiral_point(args, out):
    P = _params(args)
    s = P.s_value(_scoords(args.s, P)) if args.s is not None else 0.0
    x, y = spiral.spiral_point(P, float(Fraction(args.t)) if "/" in args.t else float(args.t), s)
    out("x", _float(x))
    out("y", _float(y))


def _scoords(text: str, P: spiral.SpiralParams) -> List[Fraction]:
    try:
        coords = [Fraction(c.strip()) for c in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise UsageError("s is a comma list of rational Q-coordinates") from None
    if len(coords) != len(P.q_basis):
        raise UsageError(f"s needs {len(P.q_basis)} Q-coordinates")
    return coords


def _membership(out, m):
    if m.member:
        out("status", "member")
        out("t", _float(m.t))
        for c, q in zip(m.s_coords, _membership.params.q_basis):
            out(f"s[{q}]", c)
        out("k", m.k)
        out("residual", f"{m.residual:.3e}")
    else:
        out("status", "nonmember_up_to_bounds")
        out("k_window", f"{m.bounds['k_window'][0]},{m.bounds['k_window'][1]}")
        out("denom_bound", m.bounds["denom_bound"])
        out("tol", m.bounds["tol"])


def cmd_spiral_member(args, out):
    P = _params(args)
    _membership.params = P
    try:
        x, y = (float(v) for v in args.point.split(","))
    except ValueError:
        raise UsageError("--point is 'x,y'") from None
    _membership(out, spiral.green_member(P, (x, y)))


def _maybe_doc(args):
    return _load(args.file) if getattr(args, "file", None) else None


def cmd_spiral_fiber(args, out):
    doc = _maybe_doc(args)
    P = _params(args, doc)
    V = _system(args, doc)
    fr = spiral.lift_fiber_roots(P, V, float(Fraction(args.s)), _window(args.twindow, "--twindow"), args.grid)
    out("s", args.s)
    out("roots", fr.count)
    for r, res in zip(fr.roots, fr.residuals):
        out("t", f"{_float(r)} residual {res:.3e}")


def cmd_spiral_scan(args, out):
    doc = _maybe_doc(args)
    P = _params(args, doc)
    V = _system(args, doc)
    sc = spiral.projection_scan(P, V, _fraction_window(args.swindow, "--swindow"), args.grid,
                                _window(args.twindow, "--twindow"), args.tgrid)
    out("intervals", len(sc.intervals))
    for a, b in sc.intervals:
        out("interval", f"[{a:.6f}, {b:.6f}] length {b - a:.6f}")


def cmd_spiral_ec(args, out):
    doc = _maybe_doc(args)
    P = _params(args, doc)
    V = _system(args, doc)
    try:
        certs = spiral.ec_search(P, V, _fraction_window(args.swindow, "--swindow"), args.grid,
                                 _window(args.twindow, "--twindow"), args.tgrid)
    except spiral.NotFound as e:
        out("status", "not_found")
        for k, v in e.windows.items():
            out(k, v if not isinstance(v, tuple) else ",".join(map(str, v)))
        return EXIT_OK
    out("status", "certificate")
    for j, c in enumerate(certs, 1):
        prefix = "" if len(certs) == 1 else f"coordinate {j} "
        for k, v in c.lines():
            out(prefix + k, v)


def _parse_t(text: str):
    """'1 + 2*pi/beta - 1/3*ln2' as a list of (rational, name)."""
    s = text.replace(" ", "")
    if not s:
        raise spiral.NonSymbolicT("empty t")
    terms = re.findall(r"[+-]?[^+-]+", s)
    if "".join(terms) != s:
        raise spiral.NonSymbolicT(f"cannot read t = {text!r}")
    out = []
    for term in terms:
        m = re.fullmatch(r"([+-]?)(?:(\d+(?:/\d+)?)\*?)?(pi/beta|pi|ln\d+)?", term)
        if not m or (m.group(2) is None and m.group(3) is None):
            raise spiral.NonSymbolicT(f"t term {term!r} is not rational*constant (floats are not symbolic)")
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(1) == "-":
            c = -c
        out.append((c, m.group(3) or "1"))
    return out


def cmd_ledger(args, out):
    P = _params(args, _maybe_doc(args))
    samples = []
    for item in args.sample or []:
        if ";" not in item:
            raise UsageError("a sample is 't-expression ; s-coordinates'")
        t, s = item.split(";", 1)
        samples.append((_parse_t(t), _scoords(s, P)))
    rep = spiral.relation_ledger(P, samples)
    out("samples", len(samples))
    out("md_exact", rep.md_exact)
    out("relations", rep.relations.basis)
    out("ld_Q", rep.ld_Q)
    out("bound", rep.bound)
    out("trd_note", rep.trd_note)
    if rep.residuals:
        out("max_relation_residual", f"{max(rep.residuals):.3e}")


# ---------------------------------------------------------------------------
# parser construction
# ---------------------------------------------------------------------------

GLOBAL_DEFAULTS = {"bound": 3, "tol": 1e-9, "kwindow": "50", "denom_bound": 64, "seed": 0, "format": "text"}


def _add_globals(c: argparse.ArgumentParser, suppress: bool):
    """Global flags; accepted before the subcommand and after it."""
    d = (lambda k: argparse.SUPPRESS) if suppress else GLOBAL_DEFAULTS.get
    c.add_argument("--bound", type=int, default=d("bound"), help="search height bound B (default 3)")
    c.add_argument("--tol", type=float, default=d("tol"), help="numerical tolerance (default 1e-9)")
    c.add_argument("--kwindow", default=d("kwindow"), help="branch window K (-K..K) or 'lo,hi' (default 50)")
    c.add_argument("--denom-bound", type=int, default=d("denom_bound"), help="denominator bound for Q (default 64)")
    c.add_argument("--seed", type=int, default=d("seed"), help="seed for randomized evaluation points")
    c.add_argument("--format", choices=("text", "tsv"), default=d("format"))


def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    _add_globals(c, suppress=True)
    return c


class _Formatter(argparse.HelpFormatter):
    """Fixed width, so usage text does not depend on the terminal."""

    def __init__(self, prog):
        super().__init__(prog, width=100)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="greenlab", description="Predimension calculus and spiral-model probes.",
                                 formatter_class=_Formatter)
    _add_globals(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, helptext, file=True, file_optional=False):
        p = sub.add_parser(name, parents=[common], help=helptext, description=helptext, formatter_class=_Formatter)
        if file:
            if file_optional:
                p.add_argument("file", nargs="?")
            else:
                p.add_argument("file")
        p.set_defaults(func=fn)
        return p

    def sel(p, over=True, within=False):
        p.add_argument("--points", help="comma-separated point names")
        p.add_argument("--words", help="green words as '[1 0];[0 1]'")
        p.add_argument("--selection", help="a named selection from the file")
        if over:
            p.add_argument("--over", help="named selection to localize over")
            p.add_argument("--over-points", help="points to localize over")
        if within:
            p.add_argument("--within", help="named selection Y for the test X <= Y")
            p.add_argument("--within-points", help="points of Y")

    add("validate", cmd_validate, "check a configuration and print its green relation lattice")
    sel(add("delta", cmd_delta, "predimension delta of a selection"))
    sel(add("trd", cmd_trd, "transcendence degree of a selection"))
    p = add("md", cmd_md, "multiplicative degree of the green part of cl(selection)")
    sel(p, over=False)
    p.add_argument("--absolute", action="store_true", help="do not quotient by the base greens")
    sel(add("strong", cmd_strong, "bounded search for delta(b/X) < 0"), over=False, within=True)
    sel(add("hull", cmd_hull, "hull of a selection"), over=False, within=True)
    sel(add("dim", cmd_dim, "dimension d = delta of the hull"), over=False)
    p = add("clmember", cmd_clmember, "bounded test of membership in the closure Cl")
    p.add_argument("--point", required=True)
    p.add_argument("--over")
    p.add_argument("--over-points")
    p = add("classify", cmd_classify, "classify a strong extension X <= Y")
    for side in ("x", "y"):
        p.add_argument(f"--{side}", help=f"named selection {side.upper()}")
        p.add_argument(f"--{side}-points")
    p = add("rotund", cmd_rotund, "bounded rotundity check of the locus of a tuple")
    p.add_argument("--points", required=True)
    p.add_argument("--over")
    p.add_argument("--over-points")
    p.add_argument("--strict", action="store_true", help="report dim M(V) > rank M first")
    p = add("hyperplane", cmd_hyperplane, "generic hyperplane locus and its strict rotundity", file_optional=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--coeffs", help="n x 2n coefficient rows '[1 2];[3 4]' (default: fresh transcendentals)")
    p.add_argument("--prefix", default="h")
    p.add_argument("--green", action="store_true")
    p.add_argument("--out")
    p = add("phi-check", cmd_phi_check, "evaluate phi_V at a green tuple against supplied subgroups")
    p.add_argument("--points", required=True)
    p.add_argument("--mu", help="comma-separated subgroup names")
    p.add_argument("--cosets", help="comma-separated coset names (base-relative form)")
    p.add_argument("--base-relative", action="store_true")
    p = add("amalgamate", cmd_amalgamate, "free amalgam of two configurations over X")
    p.add_argument("other")
    p.add_argument("--x")
    p.add_argument("--x-points")
    p.add_argument("--x-words")
    p.add_argument("--no-fresh", action="store_true", help="share transcendentals (negative control)")
    p.add_argument("--out")
    p = add("copies", cmd_copies, "k-fold free amalgam of a configuration over X")
    p.add_argument("--x")
    p.add_argument("--x-points")
    p.add_argument("--x-words")
    p.add_argument("--k", type=int, default=2)

    def spiral_opts(p):
        p.add_argument("--beta")
        p.add_argument("--qbasis", help="Q basis constants, e.g. '1 pi 1/2*ln2' (default '1')")

    def system_opts(p):
        p.add_argument("--system")
        p.add_argument("--circle", nargs=2, metavar=("CX", "R"))
        p.add_argument("--eq", action="append")
        p.add_argument("--gt", action="append")
        p.add_argument("--twindow", default="-0.1,0")
        p.add_argument("--grid", type=int, default=200)

    p = add("spiral-point", cmd_spiral_point, "exp(eps*t + s) as a plane point", file=False)
    spiral_opts(p)
    p.add_argument("--t", required=True)
    p.add_argument("--s", help="Q-coordinates of s, comma separated")
    p = add("spiral-member", cmd_spiral_member, "green membership search", file=False)
    spiral_opts(p)
    p.add_argument("--point", required=True, help="'x,y'")
    p = add("spiral-fiber", cmd_spiral_fiber, "roots t of the fiber over s", file_optional=True)
    spiral_opts(p)
    system_opts(p)
    p.add_argument("--s", required=True)
    for name, fn, helptext in (("spiral-scan", cmd_spiral_scan, "s-intervals with nonempty fiber"),
                               ("spiral-ec", cmd_spiral_ec, "search a green point on a plane curve")):
        p = add(name, fn, helptext, file_optional=True)
        spiral_opts(p)
        system_opts(p)
        p.add_argument("--swindow", default="0,2")
        p.add_argument("--tgrid", type=int, default=200)
    p = add("ledger", cmd_ledger, "exact relation lattice of constructed green points", file_optional=True)
    spiral_opts(p)
    p.add_argument("--sample", action="append", help="'t ; s', e.g. '1 + 2*pi/beta ; 1/2,0'")
    return ap


def _exit_code(e: BaseException) -> int:
    if isinstance(e, ParseError):
        return EXIT_PARSE
    if isinstance(e, ConfigError) and not isinstance(e, UnknownName):
        return EXIT_VALIDATION
    if isinstance(e, (predim.NonTermination, FactorizationBoundExceeded, spiral.Overflow,
                      spiral.WindowTooCoarse, RecursionError, MemoryError)):
        return EXIT_RESOURCE
    return EXIT_PRECONDITION


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = ap.parse_args(argv)
    except SystemExit as e:
        # argparse reports command-line syntax errors (and --help) through SystemExit
        return EXIT_PARSE if e.code else EXIT_OK
    out = Output(args.format)
    try:
        code = args.func(args, out) or EXIT_OK
    except (ParseError, ConfigError, UsageError, ValueError, LookupError, ArithmeticError, LatticeError,
            ZeroCoordinate, RuntimeError, RecursionError, MemoryError) as e:
        stdout.write(out.text())
        kind = type(e).__name__
        stderr.write(f"error: {kind}: {e}\n")
        return _exit_code(e)
    stdout.write(out.text())
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
