"""Parser for .gp configuration files.

The format is line oriented with '#' comments.  Statements:

    transcendentals t1 t2
    point p = (<expr>, <expr>)
    green z = (<expr>, <expr>)
    base { transcendentals b1; green g = (b1, 0) }
    selection X = points(z, p) greens([1 0]; [0 1])
    system V { eq (x1 - 3)^2 + y1^2 - 1; gt x1 }
    spiral { beta = 1; qbasis = 1 pi 1/2*ln2 }
    mu A = rows([2 -1])
    coset C = A at (1, 0)

Expressions use rational constants, names, + - * / ^ and parentheses, with
integer exponents only.  Inside braces ';' also ends a statement.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..config.model import Configuration, SubSelection
from ..exactalg.gaussian import I
from ..exactalg.intmat import IntMatrix, rank
from ..exactalg.poly import DivisionByZero, MultiPoly, RationalFunction
from ..spiral import PlaneSystem, QConst, SpiralParams, constant_value
from ..torus import Coset, TorusSubgroup


class ParseError(Exception):
    """Base class for grammar errors; carries line and column."""

    production = "statement"

    def __init__(self, msg: str, line: int = 0, col: int = 0, production: Optional[str] = None):
        self.line, self.col = line, col
        if production:
            self.production = production
        super().__init__(f"line {line}, column {col}: {msg} (in {self.production})")


class GrammarSyntaxError(ParseError):
    pass


class UnknownIdentifier(ParseError):
    pass


class ArityError(ParseError):
    pass


TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9']*)
  | (?P<op>[-+*/^()\[\]{},;=])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    out = []
    pos, line, lstart = 0, 1, 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if not m:
            raise GrammarSyntaxError(f"unexpected character {text[pos]!r}", line, pos - lstart + 1, "token")
        kind = m.lastgroup
        if kind == "nl":
            out.append(Token("nl", "\n", line, pos - lstart + 1))
            line += 1
            lstart = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, pos - lstart + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - lstart + 1))
    return out


@dataclass
class ConfigDocument:
    config: Configuration
    selections: Dict[str, SubSelection] = field(default_factory=dict)
    selection_src: Dict[str, Tuple[Tuple[str, ...], Tuple[Tuple[int, ...], ...]]] = field(default_factory=dict)
    systems: Dict[str, PlaneSystem] = field(default_factory=dict)
    spiral: Optional[SpiralParams] = None
    spiral_beta_text: Optional[str] = None
    mu: Dict[str, TorusSubgroup] = field(default_factory=dict)
    cosets: Dict[str, Tuple[str, Coset]] = field(default_factory=dict)
    declared_transcendentals: Tuple[str, ...] = ()


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.depth = 0  # paren/bracket depth: newlines inside are ignored

    # -- token helpers -----------------------------------------------------
    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def skip_nl(self):
        while self.peek().kind == "nl":
            self.i += 1

    def expect(self, text: str, production: str) -> Token:
        if self.depth:
            self.skip_nl()
        t = self.next()
        if t.text != text:
            shown = "end of input" if t.kind == "eof" else repr(t.text)
            raise GrammarSyntaxError(f"expected {text!r}, found {shown}", t.line, t.col, production)
        return t

    def name(self, production: str) -> Token:
        if self.depth:
            self.skip_nl()
        t = self.next()
        if t.kind != "name":
            raise GrammarSyntaxError(f"expected a name, found {t.text!r}", t.line, t.col, production)
        return t

    def end_statement(self, production: str):
        t = self.peek()
        if t.kind in ("nl", "eof") or t.text in (";", "}"):
            if t.text == ";" or t.kind == "nl":
                self.i += 1
            return
        raise GrammarSyntaxError(f"unexpected {t.text!r} after statement", t.line, t.col, production)

    # -- expressions -------------------------------------------------------
    def expr(self, variables: Tuple[str, ...], production: str):
        """expr := term (('+'|'-') term)*"""
        v = self.term(variables, production)
        while True:
            if self.depth:
                self.skip_nl()
            t = self.peek()
            if t.text == "+":
                self.i += 1
                v = v + self.term(variables, production)
            elif t.text == "-":
                self.i += 1
                v = v - self.term(variables, production)
            else:
                return v

    def term(self, variables, production):
        v = self.unary(variables, production)
        while True:
            if self.depth:
                self.skip_nl()
            t = self.peek()
            if t.text == "*":
                self.i += 1
                v = v * self.unary(variables, production)
            elif t.text == "/":
                self.i += 1
                d = self.unary(variables, production)
                try:
                    v = v / d
                except (DivisionByZero, ZeroDivisionError):
                    raise GrammarSyntaxError("division by zero", t.line, t.col, production) from None
            else:
                return v

    def unary(self, variables, production):
        if self.depth:
            self.skip_nl()
        t = self.peek()
        if t.text == "-":
            self.i += 1
            return -self.unary(variables, production)
        if t.text == "+":
            self.i += 1
            return self.unary(variables, production)
        return self.power(variables, production)

    def power(self, variables, production):
        base = self.atom(variables, production)
        if self.peek().text == "^":
            op = self.next()
            sign = 1
            if self.peek().text == "-":
                self.i += 1
                sign = -1
            paren = self.peek().text == "("
            if paren:
                self.i += 1
                if self.peek().text == "-":
                    self.i += 1
                    sign = -sign
            t = self.next()
            if t.kind != "num" or not t.text.isdigit():
                raise GrammarSyntaxError("exponents must be integers", t.line, t.col, production)
            if paren:
                self.expect(")", production)
            k = sign * int(t.text)
            try:
                return base ** k
            except (DivisionByZero, ZeroDivisionError):
                raise GrammarSyntaxError("zero raised to a negative power", op.line, op.col, production) from None
        return base

    def atom(self, variables, production):
        if self.depth:
            self.skip_nl()
        t = self.next()
        if t.kind == "num":
            return RationalFunction.const(variables, Fraction(t.text))
        if t.kind == "name":
            if t.text not in variables:
                raise UnknownIdentifier(f"unknown identifier {t.text!r}", t.line, t.col, production)
            return RationalFunction.var(variables, variables.index(t.text))
        if t.text == "(":
            self.depth += 1
            v = self.expr(variables, production)
            self.expect(")", production)
            self.depth -= 1
            return v
        shown = "end of input" if t.kind == "eof" else repr(t.text)
        raise GrammarSyntaxError(f"expected a number, name or '(', found {shown}", t.line, t.col, production)

    def int_vector(self, production) -> Tuple[int, ...]:
        self.expect("[", production)
        self.depth += 1
        vals = []
        while True:
            self.skip_nl()
            t = self.peek()
            if t.text == "]":
                self.i += 1
                break
            sign = 1
            if t.text in ("-", "+"):
                sign = -1 if t.text == "-" else 1
                self.i += 1
                t = self.peek()
            if t.kind != "num" or not t.text.isdigit():
                raise GrammarSyntaxError("integer vectors hold integers only", t.line, t.col, production)
            self.i += 1
            vals.append(sign * int(t.text))
            if self.peek().text == ",":
                self.i += 1
        self.depth -= 1
        return tuple(vals)

    def int_rows(self, production) -> List[Tuple[int, ...]]:
        rows = []
        self.skip_nl()
        if self.peek().text == ")":
            return rows
        rows.append(self.int_vector(production))
        while True:
            self.skip_nl()
            if self.peek().text != ";":
                return rows
            self.i += 1
            rows.append(self.int_vector(production))

    def names_list(self, production) -> List[str]:
        out = []
        self.skip_nl()
        if self.peek().text == ")":
            return out
        out.append(self.name(production).text)
        while True:
            self.skip_nl()
            if self.peek().text != ",":
                return out
            self.i += 1
            out.append(self.name(production).text)


class _Builder:
    """Collects statements; the configuration is assembled at the end."""

    def __init__(self):
        self.trans: List[str] = []
        self.trans_tok: Optional[Token] = None
        self.points: List[Tuple[str, bool, Tuple, Token]] = []
        self.base: Optional["_Builder"] = None


def _parse_block(p: _Parser, b: _Builder, doc_parts: Dict, inside: Optional[str]):
    while True:
        p.skip_nl()
        t = p.peek()
        if t.kind == "eof":
            if inside:
                raise GrammarSyntaxError(f"unterminated {inside} block", t.line, t.col, inside)
            return
        if t.text == "}":
            if not inside:
                raise GrammarSyntaxError("unmatched '}'", t.line, t.col, "statement")
            p.i += 1
            return
        if t.text == ";":
            p.i += 1
            continue
        if t.kind != "name":
            raise GrammarSyntaxError(f"expected a statement keyword, found {t.text!r}", t.line, t.col, "statement")
        kw = t.text
        p.i += 1
        if kw == "transcendentals":
            if b.trans_tok is not None:
                raise GrammarSyntaxError("transcendentals declared twice", t.line, t.col, "transcendentals")
            b.trans_tok = t
            while p.peek().kind == "name":
                b.trans.append(p.next().text)
            if not b.trans:
                raise ArityError("transcendentals needs at least one name", t.line, t.col, "transcendentals")
            p.end_statement("transcendentals")
        elif kw in ("point", "green"):
            nm = p.name(kw)
            p.expect("=", kw)
            start = p.i
            p.expect("(", kw)
            # the coordinate expressions are parsed later, once all transcendentals are known
            depth = 1
            while depth:
                tt = p.next()
                if tt.kind == "eof":
                    raise GrammarSyntaxError("unterminated coordinate pair", nm.line, nm.col, kw)
                if tt.text == "(":
                    depth += 1
                elif tt.text == ")":
                    depth -= 1
            b.points.append((nm.text, kw == "green", (start, p.i), nm))
            p.end_statement(kw)
        elif kw == "base":
            if inside:
                raise GrammarSyntaxError("nested base blocks are not supported", t.line, t.col, "base")
            if b.base is not None:
                raise GrammarSyntaxError("base declared twice", t.line, t.col, "base")
            p.skip_nl()
            p.expect("{", "base")
            b.base = _Builder()
            _parse_block(p, b.base, None, "base")
            p.end_statement("base")
        elif inside:
            raise GrammarSyntaxError(f"{kw!r} is not allowed inside a {inside} block", t.line, t.col, inside)
        elif kw == "selection":
            nm = p.name("selection")
            p.expect("=", "selection")
            kw2 = p.name("selection")
            if kw2.text != "points":
                raise GrammarSyntaxError("expected points(...)", kw2.line, kw2.col, "selection")
            p.expect("(", "selection")
            p.depth += 1
            names = p.names_list("selection")
            p.expect(")", "selection")
            p.depth -= 1
            rows: List[Tuple[int, ...]] = []
            if p.peek().kind == "name" and p.peek().text == "greens":
                p.i += 1
                p.expect("(", "selection")
                p.depth += 1
                rows = p.int_rows("selection")
                p.expect(")", "selection")
                p.depth -= 1
            doc_parts.setdefault("selection", []).append((nm, names, rows))
            p.end_statement("selection")
        elif kw == "system":
            nm = p.name("system")
            p.skip_nl()
            p.expect("{", "system")
            items = []
            while True:
                p.skip_nl()
                tt = p.peek()
                if tt.text == "}":
                    p.i += 1
                    break
                if tt.text == ";":
                    p.i += 1
                    continue
                k = p.name("system")
                if k.text not in ("eq", "gt"):
                    raise GrammarSyntaxError("system entries start with 'eq' or 'gt'", k.line, k.col, "system")
                start = p.i
                _skip_expr(p, "system")
                items.append((k.text, (start, p.i), k))
            doc_parts.setdefault("system", []).append((nm, items))
            p.end_statement("system")
        elif kw == "spiral":
            p.skip_nl()
            p.expect("{", "spiral")
            beta = qbasis = None
            while True:
                p.skip_nl()
                tt = p.peek()
                if tt.text == "}":
                    p.i += 1
                    break
                if tt.text == ";":
                    p.i += 1
                    continue
                k = p.name("spiral")
                p.expect("=", "spiral")
                if k.text == "beta":
                    sign = ""
                    if p.peek().text == "-":
                        p.i += 1
                        sign = "-"
                    v = p.next()
                    if v.kind != "num":
                        raise GrammarSyntaxError("beta must be a decimal number", v.line, v.col, "spiral")
                    beta = sign + v.text
                elif k.text == "qbasis":
                    qbasis = _qbasis(p)
                else:
                    raise GrammarSyntaxError(f"unknown spiral field {k.text!r}", k.line, k.col, "spiral")
            if beta is None:
                raise ArityError("spiral block needs beta", t.line, t.col, "spiral")
            doc_parts["spiral"] = (beta, qbasis, t)
            p.end_statement("spiral")
        elif kw == "mu":
            nm = p.name("mu")
            p.expect("=", "mu")
            r = p.name("mu")
            if r.text != "rows":
                raise GrammarSyntaxError("expected rows(...)", r.line, r.col, "mu")
            p.expect("(", "mu")
            p.depth += 1
            rows = p.int_rows("mu")
            p.expect(")", "mu")
            p.depth -= 1
            if not rows:
                raise ArityError("mu needs at least one row", nm.line, nm.col, "mu")
            if len({len(r) for r in rows}) != 1:
                raise ArityError("mu rows have different lengths", nm.line, nm.col, "mu")
            doc_parts.setdefault("mu", []).append((nm, rows))
            p.end_statement("mu")
        elif kw == "coset":
            nm = p.name("coset")
            p.expect("=", "coset")
            sub = p.name("coset")
            at = p.name("coset")
            if at.text != "at":
                raise GrammarSyntaxError("expected 'at'", at.line, at.col, "coset")
            spans = []
            while p.peek().text == "(":
                start = p.i
                p.i += 1
                depth = 1
                while depth:
                    tt = p.next()
                    if tt.kind == "eof":
                        raise GrammarSyntaxError("unterminated coset representative", nm.line, nm.col, "coset")
                    depth += {"(": 1, ")": -1}.get(tt.text, 0)
                spans.append((start, p.i))
            if not spans:
                raise ArityError("coset needs representative coordinates", nm.line, nm.col, "coset")
            doc_parts.setdefault("coset", []).append((nm, sub, spans))
            p.end_statement("coset")
        else:
            raise GrammarSyntaxError(f"unknown statement {kw!r}", t.line, t.col, "statement")


def _skip_expr(p: _Parser, production: str):
    depth = 0
    while True:
        t = p.peek()
        if t.kind == "eof" or (depth == 0 and (t.kind == "nl" or t.text in (";", "}"))):
            return
        if t.text == "(":
            depth += 1
        elif t.text == ")":
            depth -= 1
        p.i += 1


def _qbasis(p: _Parser) -> List[QConst]:
    """const-expr+ where const-expr := [rational '*'] ('1' | 'pi' | 'ln<p>') or a bare rational."""
    out = []
    while p.peek().kind in ("num", "name") or p.peek().text == "-":
        t = p.peek()
        sign = 1
        if t.text == "-":
            p.i += 1
            sign = -1
            t = p.peek()
        coef = Fraction(1)
        if t.kind == "num":
            p.i += 1
            coef = Fraction(t.text)
            if p.peek().text == "/":
                p.i += 1
                d = p.next()
                if d.kind != "num":
                    raise GrammarSyntaxError("expected a denominator", d.line, d.col, "qbasis")
                coef /= Fraction(d.text)
            if p.peek().text == "*":
                p.i += 1
                t = p.next()
                name = t.text
            else:
                name = "1"
        else:
            p.i += 1
            name = t.text
        try:
            constant_value(name)
            out.append(QConst(sign * coef, name))
        except ValueError as e:
            raise UnknownIdentifier(str(e), t.line, t.col, "qbasis") from None
    if not out:
        t = p.peek()
        raise ArityError("qbasis needs at least one constant", t.line, t.col, "qbasis")
    return out


def _expr_at(p: _Parser, span, variables, production):
    p.i = span[0]
    v = p.expr(variables, production)
    if p.i != span[1]:
        t = p.peek()
        raise GrammarSyntaxError(f"unexpected {t.text!r} in expression", t.line, t.col, production)
    return v


def _pair_at(p: _Parser, span, variables, production):
    p.i = span[0]
    p.expect("(", production)
    p.depth += 1
    x = p.expr(variables, production)
    t = p.peek()
    if t.text != ",":
        raise ArityError("a point needs exactly two coordinates", t.line, t.col, production)
    p.i += 1
    y = p.expr(variables, production)
    t = p.peek()
    if t.text == ",":
        raise ArityError("a point needs exactly two coordinates", t.line, t.col, production)
    p.expect(")", production)
    p.depth -= 1
    return x, y


def _build_config(p: _Parser, b: _Builder, base: Optional[Configuration], where: str) -> Configuration:
    trans = list(base.transcendentals) if base is not None else []
    for t in b.trans:
        if t in trans:
            tok = b.trans_tok
            raise GrammarSyntaxError(f"transcendental {t!r} declared twice", tok.line, tok.col, "transcendentals")
        trans.append(t)
    trans = tuple(trans)
    points = dict(base.points) if base is not None else {}
    greens = list(base.greens) if base is not None else []
    for name, green, span, tok in b.points:
        if name in points or name in trans:
            raise GrammarSyntaxError(f"name {name!r} is already used", tok.line, tok.col, "point")
        points[name] = _pair_at(p, span, trans, "green" if green else "point")
        if green:
            greens.append(name)
    return Configuration(trans, points, greens, base)


def parse_config(text: str) -> ConfigDocument:
    """Parse a .gp document into a configuration plus its named objects."""
    p = _Parser(text)
    b = _Builder()
    parts: Dict = {}
    _parse_block(p, b, parts, None)
    base = _build_config(p, b.base, None, "base") if b.base is not None else None
    config = _build_config(p, b, base, "top")
    doc = ConfigDocument(config, declared_transcendentals=tuple(b.trans))
    for nm, names, rows in parts.get("selection", []):
        for n in names:
            if n not in config.points:
                raise UnknownIdentifier(f"unknown point {n!r}", nm.line, nm.col, "selection")
        for r in rows:
            if len(r) != config.ngreens:
                raise ArityError(f"green word of length {len(r)}, expected {config.ngreens}",
                                 nm.line, nm.col, "selection")
        if nm.text in doc.selections:
            raise GrammarSyntaxError(f"selection {nm.text!r} defined twice", nm.line, nm.col, "selection")
        doc.selections[nm.text] = SubSelection.of(config, names, rows)
        doc.selection_src[nm.text] = (tuple(names), tuple(rows))
    for nm, items in parts.get("system", []):
        idx = 1
        for kind, span, tok in items:
            for i in range(span[0], span[1]):
                tt = p.toks[i]
                m = re.fullmatch(r"[xy](\d+)", tt.text) if tt.kind == "name" else None
                if tt.kind == "name" and not m:
                    raise UnknownIdentifier(f"unknown identifier {tt.text!r} (systems use x1, y1, ...)",
                                            tt.line, tt.col, "system")
                if m:
                    idx = max(idx, int(m.group(1)))
        vs = tuple(v for j in range(1, idx + 1) for v in (f"x{j}", f"y{j}"))
        eqs, gts = [], []
        for kind, span, tok in items:
            f = _expr_at(p, span, vs, "system")
            if not f.den.is_const():
                raise GrammarSyntaxError("system entries must be polynomials", tok.line, tok.col, "system")
            poly = f.num.scale(f.den.lead_coeff().inverse())
            (eqs if kind == "eq" else gts).append(poly)
        if not eqs:
            raise ArityError("a system needs at least one equality", nm.line, nm.col, "system")
        doc.systems[nm.text] = PlaneSystem(idx, eqs, gts)
    if "spiral" in parts:
        beta, qbasis, tok = parts["spiral"]
        try:
            doc.spiral = SpiralParams.make(beta, [(q.coef, q.name) for q in qbasis] if qbasis else None)
        except ValueError as e:
            raise GrammarSyntaxError(str(e), tok.line, tok.col, "spiral") from None
        doc.spiral_beta_text = beta
    for nm, rows in parts.get("mu", []):
        if _rank(rows) != len(rows):
            raise ArityError("mu rows must be linearly independent", nm.line, nm.col, "mu")
        doc.mu[nm.text] = TorusSubgroup([list(r) for r in rows])
    for nm, sub, spans in parts.get("coset", []):
        if sub.text not in doc.mu:
            raise UnknownIdentifier(f"unknown subgroup {sub.text!r}", sub.line, sub.col, "coset")
        A = doc.mu[sub.text]
        if len(spans) != A.ambient_n:
            raise ArityError(f"coset representative needs {A.ambient_n} coordinate pairs",
                             nm.line, nm.col, "coset")
        reps = []
        for span in spans:
            x, y = _pair_at(p, span, config.transcendentals, "coset")
            z = x + y * I
            if z.is_zero():
                raise GrammarSyntaxError("coset representative has a zero coordinate", nm.line, nm.col, "coset")
            reps.append(z)
        doc.cosets[nm.text] = (sub.text, Coset(A, tuple(reps)))
    return doc


def _rank(rows) -> int:
    return rank(IntMatrix([list(r) for r in rows], len(rows[0])))
