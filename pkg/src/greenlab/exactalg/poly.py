"""Multivariate polynomials and rational functions over Q(i).

Polynomials carry an ordered tuple of variable names and a dict from exponent
tuples to nonzero GaussianRational coefficients.  Terms are ordered by graded
lexicographic order with the first variable largest.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

from .gaussian import GaussianRational, ONE, ZERO

Exp = Tuple[int, ...]


class DivisionByZero(ZeroDivisionError):
    """Raised when dividing by the zero polynomial or rational function."""


class NotDivisible(ArithmeticError):
    """Raised by exact division when the divisor does not divide."""


def grlex_key(e: Exp):
    return (sum(e), e)


def _coerce_coeff(c) -> GaussianRational:
    return GaussianRational.coerce(c)


class MultiPoly:
    """Polynomial in a fixed ordered set of variables with Q(i) coefficients."""

    __slots__ = ("vars", "terms", "_lead", "_hash")

    def __init__(self, variables: Sequence[str], terms: Dict[Exp, GaussianRational] | None = None,
                 _trusted: bool = False):
        self.vars = tuple(variables)
        if terms is None:
            terms = {}
        if not _trusted:
            n = len(self.vars)
            clean = {}
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != n or any(x < 0 for x in e):
                    raise ValueError(f"bad exponent {e} for variables {self.vars}")
                c = _coerce_coeff(c)
                if not c.is_zero():
                    clean[e] = c
            terms = clean
        self.terms = terms
        self._lead = None
        self._hash = None

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, variables) -> "MultiPoly":
        return cls(variables, {}, _trusted=True)

    @classmethod
    def const(cls, variables, c) -> "MultiPoly":
        c = _coerce_coeff(c)
        n = len(tuple(variables))
        if c.is_zero():
            return cls(variables, {}, _trusted=True)
        return cls(variables, {(0,) * n: c}, _trusted=True)

    @classmethod
    def var(cls, variables, name_or_index) -> "MultiPoly":
        variables = tuple(variables)
        idx = name_or_index if isinstance(name_or_index, int) else variables.index(name_or_index)
        e = [0] * len(variables)
        e[idx] = 1
        return cls(variables, {tuple(e): ONE}, _trusted=True)

    def _new(self, terms) -> "MultiPoly":
        return MultiPoly(self.vars, terms, _trusted=True)

    # -- basic queries -----------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        if not self.terms:
            return True
        return len(self.terms) == 1 and not any(next(iter(self.terms)))

    def const_value(self) -> GaussianRational:
        if not self.terms:
            return ZERO
        if not self.is_const():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def is_one(self) -> bool:
        return self.is_const() and self.const_value().is_one()

    def lead_exp(self) -> Exp:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        if self._lead is None:
            self._lead = max(self.terms, key=grlex_key)
        return self._lead

    def lead_coeff(self) -> GaussianRational:
        if not self.terms:
            return ZERO
        return self.terms[self.lead_exp()]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, idx: int) -> int:
        if not self.terms:
            return -1
        return max(e[idx] for e in self.terms)

    def support_vars(self) -> set:
        out = set()
        for e in self.terms:
            for k, x in enumerate(e):
                if x:
                    out.add(k)
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def sort_key(self):
        """Deterministic ordering key used to list bases canonically."""
        items = self.sorted_terms()
        return (self.total_degree(),
                tuple((tuple(-x for x in e), c.re, c.im) for e, c in items))

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.terms.values())

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch {self.vars} vs {other.vars}")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(self.vars, other)

    def __add__(self, other):
        other = self._lift(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                s = v + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "MultiPoly":
        c = _coerce_coeff(c)
        if c.is_zero():
            return self._new({})
        if c.is_one():
            return self
        return self._new({e: v * c for e, v in self.terms.items()})

    def mul_term(self, exp: Exp, c) -> "MultiPoly":
        c = _coerce_coeff(c)
        if c.is_zero():
            return self._new({})
        return self._new({tuple(a + b for a, b in zip(e, exp)): v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return self._new({})
        if len(other.terms) == 1:
            (e, c), = other.terms.items()
            return self.mul_term(e, c)
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            return other.mul_term(e, c)
        out: Dict[Exp, GaussianRational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                p = c1 * c2
                out[e] = p if v is None else v + p
        return self._new({e: c for e, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers need a nonnegative integer exponent")
        result = MultiPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def conjugate(self) -> "MultiPoly":
        return self._new({e: c.conjugate() for e, c in self.terms.items()})

    def monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        return self.scale(self.lead_coeff().inverse())

    def diff(self, idx: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            k = e[idx]
            if k:
                ne = list(e)
                ne[idx] = k - 1
                out[tuple(ne)] = c * k
        return self._new(out)

    # -- division ----------------------------------------------------------
    def exquo(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient self / other; raises NotDivisible otherwise."""
        other = self._lift(other)
        if other.is_zero():
            raise DivisionByZero("exact division by zero polynomial")
        if other.is_const():
            return self.scale(other.const_value().inverse())
        le = other.lead_exp()
        lc_inv = other.lead_coeff().inverse()
        rem = dict(self.terms)
        quot = {}
        other_items = list(other.terms.items())
        while rem:
            e = max(rem, key=grlex_key)
            if any(a < b for a, b in zip(e, le)):
                raise NotDivisible("polynomial does not divide exactly")
            qe = tuple(a - b for a, b in zip(e, le))
            qc = rem[e] * lc_inv
            quot[qe] = qc
            for oe, oc in other_items:
                te = tuple(a + b for a, b in zip(oe, qe))
                v = rem.get(te)
                d = oc * qc
                if v is None:
                    rem[te] = -d
                else:
                    s = v - d
                    if s.is_zero():
                        del rem[te]
                    else:
                        rem[te] = s
        return self._new(quot)

    def divides(self, other: "MultiPoly") -> bool:
        """True when self divides other exactly."""
        try:
            other.exquo(self)
            return True
        except NotDivisible:
            return False

    # -- recursive views ---------------------------------------------------
    def coeffs_in(self, idx: int) -> Dict[int, "MultiPoly"]:
        """Coefficients with respect to variable idx, as polynomials in the same ring."""
        buckets: Dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[idx]
            ne = e[:idx] + (0,) + e[idx + 1:]
            buckets.setdefault(k, {})[ne] = c
        return {k: self._new(t) for k, t in buckets.items()}

    # -- evaluation --------------------------------------------------------
    def evaluate(self, values: Sequence) -> GaussianRational:
        vals = [_coerce_coeff(v) for v in values]
        total = ZERO
        powers = [dict() for _ in vals]
        for e, c in self.terms.items():
            term = c
            for k, x in enumerate(e):
                if x:
                    p = powers[k].get(x)
                    if p is None:
                        p = vals[k] ** x
                        powers[k][x] = p
                    term = term * p
            total = total + term
        return total

    def eval_mod(self, values: Sequence[int], p: int, sqrt_m1: int) -> int:
        total = 0
        for e, c in self.terms.items():
            term = gaussian_mod(c, p, sqrt_m1)
            for k, x in enumerate(e):
                if x:
                    term = term * pow(values[k], x, p) % p
            total += term
        return total % p

    def evaluate_complex(self, values: Sequence[complex]) -> complex:
        total = 0j
        for e, c in self.terms.items():
            term = c.to_complex()
            for k, x in enumerate(e):
                if x:
                    term *= values[k] ** x
            total += term
        return total

    def substitute(self, mapping: Dict[int, "MultiPoly"], target_vars=None) -> "MultiPoly":
        """Replace variable idx by mapping[idx]; other variables map to themselves in target_vars."""
        tv = tuple(target_vars) if target_vars is not None else self.vars
        images = []
        for k, name in enumerate(self.vars):
            if k in mapping:
                images.append(mapping[k])
            else:
                images.append(MultiPoly.var(tv, tv.index(name)))
        total = MultiPoly.zero(tv)
        cache = {}
        for e, c in self.terms.items():
            term = MultiPoly.const(tv, c)
            for k, x in enumerate(e):
                if x:
                    key = (k, x)
                    pw = cache.get(key)
                    if pw is None:
                        pw = images[k] ** x
                        cache[key] = pw
                    term = term * pw
            total = total + term
        return total

    def embed(self, new_vars: Sequence[str]) -> "MultiPoly":
        """Re-express in a ring whose variables contain all of ours."""
        new_vars = tuple(new_vars)
        if new_vars == self.vars:
            return self
        pos = [new_vars.index(v) for v in self.vars]
        n = len(new_vars)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for k, x in zip(pos, e):
                ne[k] = x
            out[tuple(ne)] = c
        return MultiPoly(new_vars, out, _trusted=True)

    def rename(self, new_vars: Sequence[str]) -> "MultiPoly":
        new_vars = tuple(new_vars)
        if len(new_vars) != len(self.vars):
            raise ValueError("rename needs the same number of variables")
        return MultiPoly(new_vars, self.terms, _trusted=True)

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = _coerce_coeff(other)
            if c.is_zero():
                return not self.terms
            return self.is_const() and self.const_value() == c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({self.vars}, {self})"

    def __str__(self):
        return format_poly(self)


def gaussian_mod(c: GaussianRational, p: int, sqrt_m1: int) -> int:
    re = c.re.numerator * pow(c.re.denominator, -1, p) % p
    if not c.im:
        return re
    im = c.im.numerator * pow(c.im.denominator, -1, p) % p
    return (re + sqrt_m1 * im) % p


def _fmt_coeff(c: GaussianRational) -> str:
    if c.is_real():
        return str(c.re)
    return str(c)


def format_poly(f: MultiPoly) -> str:
    if not f.terms:
        return "0"
    parts = []
    for e, c in f.sorted_terms():
        mono = []
        for name, x in zip(f.vars, e):
            if x == 1:
                mono.append(name)
            elif x:
                mono.append(f"{name}^{x}")
        negative = c.is_real() and c.re < 0
        cabs = -c if negative else c
        if not mono:
            body = _fmt_coeff(cabs)
        elif cabs.is_one():
            body = "*".join(mono)
        else:
            body = _fmt_coeff(cabs) + "*" + "*".join(mono)
        parts.append(("-" if negative else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# gcd by recursive content / primitive part
# ---------------------------------------------------------------------------

def _first_var(*polys: MultiPoly) -> int:
    best = None
    for f in polys:
        s = f.support_vars()
        if s:
            m = min(s)
            if best is None or m < best:
                best = m
    return -1 if best is None else best


def content_in(f: MultiPoly, idx: int) -> MultiPoly:
    """gcd of the coefficients of f viewed as a polynomial in variable idx."""
    g = None
    for c in f.coeffs_in(idx).values():
        g = c.monic() if g is None else poly_gcd(g, c)
        if g.is_one():
            break
    if g is None:
        return MultiPoly.zero(f.vars)
    return g


def _lc_in(f: MultiPoly, idx: int) -> Tuple[int, MultiPoly]:
    cs = f.coeffs_in(idx)
    d = max(cs)
    return d, cs[d]


def prem(a: MultiPoly, b: MultiPoly, idx: int) -> MultiPoly:
    """Pseudo-remainder of a by b with respect to variable idx."""
    db, lb = _lc_in(b, idx)
    r = a
    while not r.is_zero():
        dr = r.degree(idx)
        if dr < db:
            break
        _, lr = _lc_in(r, idx)
        shift = [0] * a.nvars
        shift[idx] = dr - db
        r = r * lb - (b * lr).mul_term(tuple(shift), ONE)
    return r


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Monic gcd of two polynomials (gcd(0, 0) = 0)."""
    a._check(b)
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_const() or b.is_const():
        return MultiPoly.const(a.vars, 1)
    if len(a.terms) == 1 and len(b.terms) == 1:
        ea, eb = next(iter(a.terms)), next(iter(b.terms))
        return MultiPoly(a.vars, {tuple(min(x, y) for x, y in zip(ea, eb)): ONE}, _trusted=True)
    idx = _first_var(a, b)
    da, db = a.degree(idx), b.degree(idx)
    if da == 0:
        return poly_gcd(a, content_in(b, idx))
    if db == 0:
        return poly_gcd(content_in(a, idx), b)
    ca, cb = content_in(a, idx), content_in(b, idx)
    g_cont = poly_gcd(ca, cb)
    pa, pb = a.exquo(ca), b.exquo(cb)
    if pa.degree(idx) < pb.degree(idx):
        pa, pb = pb, pa
    while not pb.is_zero():
        r = prem(pa, pb, idx)
        pa = pb
        if r.is_zero():
            pb = r
            break
        if r.degree(idx) == 0:
            pa = MultiPoly.const(a.vars, 1)
            break
        pb = r.exquo(content_in(r, idx))
    g_prim = pa
    if not g_prim.is_const():
        g_prim = g_prim.exquo(content_in(g_prim, idx))
    return (g_cont * g_prim).monic()


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

class RationalFunction:
    """Quotient num/den in lowest terms with monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, _canonical: bool = False):
        if den is None:
            den = MultiPoly.const(num.vars, 1)
        num._check(den)
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if not _canonical:
            num, den = _canonicalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @property
    def vars(self):
        return self.num.vars

    @classmethod
    def const(cls, variables, c) -> "RationalFunction":
        return cls(MultiPoly.const(variables, c), MultiPoly.const(variables, 1), _canonical=True)

    @classmethod
    def var(cls, variables, name_or_index) -> "RationalFunction":
        return cls(MultiPoly.var(variables, name_or_index), MultiPoly.const(variables, 1), _canonical=True)

    @classmethod
    def from_poly(cls, f: MultiPoly) -> "RationalFunction":
        return cls(f, MultiPoly.const(f.vars, 1), _canonical=True)

    def _lift(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch {self.vars} vs {other.vars}")
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction.from_poly(other)
        return RationalFunction.const(self.vars, other)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self) -> GaussianRational:
        return self.num.const_value() / self.den.const_value()

    def is_poly(self) -> bool:
        return self.den.is_one()

    def is_real(self) -> bool:
        return self.num.is_real() and self.den.is_real()

    def support_vars(self) -> set:
        return self.num.support_vars() | self.den.support_vars()

    def __add__(self, other):
        other = self._lift(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        if self.den.is_one():
            return RationalFunction(self.num * other.den + other.num, other.den, _canonical=True)
        if other.den.is_one():
            return RationalFunction(self.num + other.num * self.den, self.den, _canonical=True)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if self.is_zero() or other.is_zero():
            return RationalFunction.const(self.vars, 0)
        if self.den.is_one() and other.den.is_one():
            return RationalFunction(self.num * other.num, self.den, _canonical=True)
        if other.is_const():
            c = other.const_value()
            return RationalFunction(self.num.scale(c), self.den, _canonical=True)
        if self.is_const():
            c = self.const_value()
            return RationalFunction(other.num.scale(c), other.den, _canonical=True)
        # cross-cancel before multiplying to keep sizes small
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1, d2 = self.num.exquo(g1), other.den.exquo(g1)
        n2, d1 = other.num.exquo(g2), self.den.exquo(g2)
        return RationalFunction(n1 * n2, d1 * d2, _canonical=_monic_den(n1 * n2, d1 * d2))

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise DivisionByZero("inverse of zero rational function")
        lc = self.num.lead_coeff()
        return RationalFunction(self.den.scale(lc.inverse()), self.num.scale(lc.inverse()), _canonical=True)

    def __truediv__(self, other):
        other = self._lift(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise ValueError("rational function powers need an integer exponent")
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n, _canonical=True)

    intpow = __pow__

    def partial(self, idx: int) -> "RationalFunction":
        dn = self.num.diff(idx)
        if self.den.is_const():
            return RationalFunction(dn, self.den, _canonical=True)
        dd = self.den.diff(idx)
        if dd.is_zero():
            return RationalFunction(dn, self.den)
        return RationalFunction(dn * self.den - self.num * dd, self.den * self.den)

    def conjugate(self) -> "RationalFunction":
        return RationalFunction(self.num.conjugate(), self.den.conjugate())

    def real_part(self) -> "RationalFunction":
        """Real part, treating the variables as real."""
        return (self + self.conjugate()) * GaussianRational(Fraction(1, 2))

    def imag_part(self) -> "RationalFunction":
        return (self - self.conjugate()) * GaussianRational(0, Fraction(-1, 2))

    def evaluate(self, values) -> GaussianRational:
        d = self.den.evaluate(values)
        if d.is_zero():
            raise DivisionByZero("denominator vanishes at evaluation point")
        return self.num.evaluate(values) / d

    def eval_mod(self, values, p, sqrt_m1):
        d = self.den.eval_mod(values, p, sqrt_m1)
        if d == 0:
            raise DivisionByZero("denominator vanishes mod p")
        return self.num.eval_mod(values, p, sqrt_m1) * pow(d, -1, p) % p

    def evaluate_complex(self, values) -> complex:
        return self.num.evaluate_complex(values) / self.den.evaluate_complex(values)

    def embed(self, new_vars) -> "RationalFunction":
        new_vars = tuple(new_vars)
        num, den = self.num.embed(new_vars), self.den.embed(new_vars)
        pos = [new_vars.index(v) for v in self.vars]
        if pos != sorted(pos) and not den.is_const():
            # a different variable order can change the leading term of den
            lc = den.lead_coeff()
            if not lc.is_one():
                inv = lc.inverse()
                num, den = num.scale(inv), den.scale(inv)
        return RationalFunction(num, den, _canonical=True)

    def rename(self, new_vars) -> "RationalFunction":
        return RationalFunction(self.num.rename(new_vars), self.den.rename(new_vars), _canonical=True)

    def substitute(self, mapping: Dict[int, "RationalFunction"], target_vars) -> "RationalFunction":
        """Compose with a substitution of variables by rational functions."""
        tv = tuple(target_vars)

        def sub_poly(f: MultiPoly) -> "RationalFunction":
            total = RationalFunction.const(tv, 0)
            for e, c in f.terms.items():
                term = RationalFunction.const(tv, c)
                for k, x in enumerate(e):
                    if x:
                        base = mapping[k] if k in mapping else RationalFunction.var(tv, tv.index(f.vars[k]))
                        term = term * base ** x
                total = total + term
            return total

        return sub_poly(self.num) / sub_poly(self.den)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.den.is_one() and self.num == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.den.is_one():
            return format_poly(self.num)
        n = format_poly(self.num)
        d = format_poly(self.den)
        if len(self.num.terms) > 1:
            n = f"({n})"
        if len(self.den.terms) > 1 or not self.den.lead_coeff().is_one() or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"


def _monic_den(num: MultiPoly, den: MultiPoly) -> bool:
    return den.lead_coeff().is_one()


def _canonicalize(num: MultiPoly, den: MultiPoly):
    if num.is_zero():
        return num, MultiPoly.const(num.vars, 1)
    if den.is_const():
        c = den.const_value()
        return num.scale(c.inverse()), MultiPoly.const(num.vars, 1)
    g = poly_gcd(num, den)
    if not g.is_one():
        num = num.exquo(g)
        den = den.exquo(g)
    lc = den.lead_coeff()
    if not lc.is_one():
        inv = lc.inverse()
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den


def rf_arith(a: RationalFunction, b, op: str) -> RationalFunction:
    """Dispatch helper: op in {add, sub, mul, div, intpow}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if isinstance(b, RationalFunction) and b.is_zero():
            raise DivisionByZero("division by zero rational function")
        return a / b
    if op == "intpow":
        if int(b) < 0 and a.is_zero():
            raise DivisionByZero("negative power of zero")
        return a ** int(b)
    raise ValueError(f"unknown operation {op!r}")


def rf_partial(f: RationalFunction, var_index: int) -> RationalFunction:
    if not 0 <= var_index < len(f.vars):
        raise ValueError("variable index out of range")
    return f.partial(var_index)


def polys_vars_union(items: Iterable) -> tuple:
    seen = []
    for it in items:
        for v in it.vars:
            if v not in seen:
                seen.append(v)
    return tuple(seen)
