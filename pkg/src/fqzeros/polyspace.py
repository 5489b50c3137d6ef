"""Sparse multivariate polynomials over F_q, monomial orderings, rank and gcd.

Polynomials are stored as ``{exponent tuple: coefficient index}`` with no
zero coefficients.  Monomials are compared with plain tuple comparison, so
the leading term under descending lexicographic order is ``max(terms)``.
"""

from __future__ import annotations

import random
import re
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    AllZero,
    BothZero,
    DegreeTooLarge,
    DivisionByZeroPoly,
    FieldMismatch,
    IndexOutOfRange,
    MixedParameters,
    NotDivisible,
    ParseError,
)
from .gf import FieldSpec, matrix_rank

Monomial = tuple  # tuple[int, ...]


# -- monomial enumerations -----------------------------------------------------

def monomials_desc_lex(m: int, d: int) -> list[Monomial]:
    """All (m+1)-tuples of nonnegative integers summing to d, descending lex."""
    if m < 0 or d < 0:
        raise ValueError("m and d must be nonnegative")
    out: list[Monomial] = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(prefix + (left,))
            return
        for a in range(left, -1, -1):
            rec(prefix + (a,), left - a, slots - 1)

    rec((), d, m + 1)
    return out


def monomials_upto(n: int, d: int) -> list[Monomial]:
    """All n-tuples with total degree <= d, descending lex."""
    return [mono[:n] for mono in monomials_desc_lex(n, d)] if n > 0 else [()]


def nth_desc_lex(m: int, d: int, r: int) -> Monomial:
    """The r-th (1-based) exponent tuple of degree d in m+1 variables, descending lex."""
    total = comb(m + d, d)
    if not 1 <= r <= total:
        raise IndexOutOfRange(f"r={r} not in [1, {total}]")
    k = r - 1
    nu = []
    left = d
    for slot in range(m, 0, -1):
        # tuples with the current coordinate equal to a: comb(left - a + slot - 1, slot - 1)
        for a in range(left, -1, -1):
            block = comb(left - a + slot - 1, slot - 1)
            if k < block:
                nu.append(a)
                left -= a
                break
            k -= block
    nu.append(left)
    return tuple(nu)


def first_nonzero(nu: Sequence[int]) -> int:
    """1-based position of the first nonzero coordinate."""
    for i, v in enumerate(nu, start=1):
        if v:
            return i
    raise ValueError("all coordinates are zero")


def lambda_size(d: int, m: int, q: int) -> int:
    if not 1 <= d < q:
        raise DegreeTooLarge(f"need 1 <= d < q, got d={d}, q={q}")
    return comb(m + d, m)


def lambda_nth(d: int, m: int, q: int, r: int) -> Monomial:
    """The r-th tuple, in ascending lex order, of m-tuples over [0, q-1]
    whose coordinate sum is at least m(q-1) - d.

    With gamma_i = q-1-beta_i the set becomes {sum gamma <= d}, whose
    ascending order in beta is descending order in gamma.
    """
    size = lambda_size(d, m, q)
    if not 1 <= r <= size:
        raise IndexOutOfRange(f"r={r} not in [1, {size}]")
    gamma = nth_desc_lex(m, d, r)[:m]
    return tuple(q - 1 - g for g in gamma)


# -- raw dict arithmetic ----------------------------------------------------------

def _add_into(F: FieldSpec, acc: dict, terms: Mapping, scale: int = 1) -> dict:
    for mono, c in terms.items():
        if scale != 1:
            c = F.fmul(c, scale)
        v = F.fadd(acc.get(mono, 0), c)
        if v:
            acc[mono] = v
        else:
            acc.pop(mono, None)
    return acc


def _mul_terms(F: FieldSpec, a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            mono = tuple(x + y for x, y in zip(ma, mb))
            v = F.fadd(out.get(mono, 0), F.fmul(ca, cb))
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
    return out


def _scale(F: FieldSpec, a: Mapping, c: int) -> dict:
    if c == 0:
        return {}
    return {mono: F.fmul(v, c) for mono, v in a.items()}


def _monic(F: FieldSpec, a: Mapping) -> dict:
    if not a:
        return {}
    return _scale(F, a, F.finv(a[max(a)]))


def _divmod_exact(F: FieldSpec, f: Mapping, g: Mapping) -> dict | None:
    """h with f = g*h, or None when g does not divide f."""
    if not g:
        raise DivisionByZeroPoly("division by the zero polynomial")
    rem = dict(f)
    lg = max(g)
    inv = F.finv(g[lg])
    quot: dict = {}
    while rem:
        lr = max(rem)
        shift = tuple(x - y for x, y in zip(lr, lg))
        if min(shift) < 0:
            return None
        c = F.fmul(rem[lr], inv)
        quot[shift] = c
        term = {shift: F.fneg(c)}
        _add_into(F, rem, _mul_terms(F, term, g))
    return quot


def _split_last(a: Mapping) -> dict[int, dict]:
    """Coefficients with respect to the last variable, as polys in the rest."""
    out: dict[int, dict] = {}
    for mono, c in a.items():
        out.setdefault(mono[-1], {})[mono[:-1]] = c
    return out


def _embed_last(a: Mapping, k: int = 0) -> dict:
    return {mono + (k,): c for mono, c in a.items()}


def _deg_last(a: Mapping) -> int:
    return max(mono[-1] for mono in a)


def _is_const(a: Mapping) -> bool:
    return len(a) == 1 and not any(next(iter(a)))


def _content(F: FieldSpec, a: Mapping, n: int) -> dict:
    parts = sorted(_split_last(a).values(), key=len)
    acc = _monic(F, parts[0])
    for p in parts[1:]:
        if _is_const(acc):
            break
        acc = _gcd(F, acc, p, n - 1)
    return acc


def _prim(F: FieldSpec, a: Mapping, n: int) -> tuple[dict, dict]:
    c = _content(F, a, n)
    pp = _divmod_exact(F, a, _embed_last(c))
    assert pp is not None
    return c, pp


def _prem(F: FieldSpec, a: dict, b: dict) -> dict:
    """Pseudo-remainder of a by b in R[x_last]."""
    db = _deg_last(b)
    lb = _embed_last(_split_last(b)[db])
    a = dict(a)
    while a and _deg_last(a) >= db:
        da = _deg_last(a)
        la = _split_last(a)[da]
        shifted = {mono[:-1] + (mono[-1] + da - db,): c for mono, c in b.items()}
        t1 = _mul_terms(F, lb, a)
        t2 = _mul_terms(F, _embed_last(la), shifted)
        a = _add_into(F, t1, t2, F.fneg(1))
    return a


def _gcd(F: FieldSpec, f: Mapping, g: Mapping, n: int) -> dict:
    """Monic gcd of f, g in F_q[x_0..x_{n-1}] by content / primitive PRS recursion."""
    if not f and not g:
        raise BothZero("gcd of two zero polynomials")
    if not f:
        return _monic(F, g)
    if not g:
        return _monic(F, f)
    if n == 0 or _is_const(f) or _is_const(g):
        return {(0,) * n: 1}
    if len(f) == 1 or len(g) == 1:
        # a monomial divides only through its variables
        monos = list(f) + list(g)
        return {tuple(min(e) for e in zip(*monos)): 1}
    cf, pf = _prim(F, f, n)
    cg, pg = _prim(F, g, n)
    c = _embed_last(_gcd(F, cf, cg, n - 1))
    a, b = (pf, pg) if _deg_last(pf) >= _deg_last(pg) else (pg, pf)
    while b and _deg_last(b) > 0:
        r = _prem(F, a, b)
        a = b
        b = _prim(F, r, n)[1] if r else {}
    h = a if not b else {(0,) * n: 1}
    if _deg_last(h) == 0:
        h = {(0,) * n: 1}
    else:
        h = _prim(F, h, n)[1]
    return _monic(F, _mul_terms(F, c, h))


# -- polynomial classes -----------------------------------------------------------------

class Poly:
    """Sparse polynomial in ``nvars`` variables over a finite field."""

    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field: FieldSpec, nvars: int, terms: Mapping | None = None):
        self.field = field
        self.nvars = nvars
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(x) for x in mono)
            if len(mono) != nvars or min(mono, default=0) < 0:
                raise ValueError(f"bad exponent vector {mono} for {nvars} variables")
            c = field._check(c)
            if c:
                clean[mono] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, field, nvars, terms):
        obj = cls.__new__(cls)
        obj.field, obj.nvars, obj.terms, obj._hash = field, nvars, terms, None
        return obj

    def _like(self, terms):
        return Poly._raw(self.field, self.nvars, terms)

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.field is not self.field:
                raise FieldMismatch("polynomials over different fields")
            if other.nvars != self.nvars:
                raise MixedParameters("polynomials in different numbers of variables")
            return other.terms
        c = self.field._check(other)
        return {(0,) * self.nvars: c} if c else {}

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        return max((sum(mono) for mono in self.terms), default=-1)

    def leading(self) -> tuple[Monomial, int]:
        lm = max(self.terms)
        return lm, self.terms[lm]

    def __add__(self, other):
        return self._like(_add_into(self.field, dict(self.terms), self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        F = self.field
        return self._like(_add_into(F, dict(self.terms), self._coerce(other), F.fneg(1)))

    def __neg__(self):
        return self._like(_scale(self.field, self.terms, self.field.fneg(1)))

    def __mul__(self, other):
        if isinstance(other, Poly):
            return Poly._raw(self.field, self.nvars, _mul_terms(self.field, self.terms, self._coerce(other)))
        return self._like(_scale(self.field, self.terms, self.field._check(other)))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        out = Poly._raw(self.field, self.nvars, {(0,) * self.nvars: 1})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field is other.field and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.q, self.nvars, frozenset(self.terms.items())))
        return self._hash

    def monic(self):
        return self._like(_monic(self.field, self.terms))

    def eval(self, point: Sequence[int]) -> int:
        return eval_poly(self, point)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"{type(self).__name__}({format_poly(self)!r}, q={self.field.q})"


class HomPoly(Poly):
    """Homogeneous polynomial of degree d in x_0..x_m.

    The zero polynomial keeps its ambient (m, d).
    """

    __slots__ = ("d",)

    def __init__(self, field: FieldSpec, m: int, d: int, terms: Mapping | None = None):
        super().__init__(field, m + 1, terms)
        for mono in self.terms:
            if sum(mono) != d:
                raise ValueError(f"monomial {mono} does not have degree {d}")
        self.d = d

    @property
    def m(self) -> int:
        return self.nvars - 1

    @classmethod
    def _rawh(cls, field, m, d, terms):
        obj = cls.__new__(cls)
        obj.field, obj.nvars, obj.terms, obj._hash, obj.d = field, m + 1, terms, None, d
        return obj

    @classmethod
    def from_poly(cls, f: Poly, d: int | None = None) -> "HomPoly":
        if d is None:
            d = f.total_degree if f.terms else 0
        return cls(f.field, f.nvars - 1, d, f.terms)

    def _like(self, terms):
        return HomPoly._rawh(self.field, self.m, self.d, terms)

    def __add__(self, other):
        if isinstance(other, HomPoly) and other.d != self.d and self.terms and other.terms:
            raise MixedParameters("adding homogeneous polynomials of different degrees")
        out = super().__add__(other)
        if isinstance(other, HomPoly) and not self.terms:
            out.d = other.d
        return out

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, HomPoly) and other.d != self.d and self.terms and other.terms:
            raise MixedParameters("subtracting homogeneous polynomials of different degrees")
        return super().__sub__(other)

    def __mul__(self, other):
        if isinstance(other, HomPoly):
            if other.field is not self.field:
                raise FieldMismatch("polynomials over different fields")
            if other.nvars != self.nvars:
                raise MixedParameters("polynomials in different numbers of variables")
            return HomPoly._rawh(self.field, self.m, self.d + other.d,
                                 _mul_terms(self.field, self.terms, other.terms))
        if isinstance(other, Poly):
            return Poly.__mul__(self, other)
        return self._like(_scale(self.field, self.terms, self.field._check(other)))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        out = constant(self.field, self.m)
        for _ in range(k):
            out = out * self
        return out

    def coefficient_vector(self, monos: Sequence[Monomial] | None = None) -> np.ndarray:
        if monos is None:
            monos = monomials_desc_lex(self.m, self.d)
        return np.array([self.terms.get(mono, 0) for mono in monos], dtype=np.int64)


def hom_from_vector(field: FieldSpec, m: int, d: int, vec, monos=None) -> HomPoly:
    if monos is None:
        monos = monomials_desc_lex(m, d)
    terms = {mono: int(c) for mono, c in zip(monos, vec) if int(c)}
    return HomPoly._rawh(field, m, d, terms)


def variable(field: FieldSpec, m: int, i: int) -> HomPoly:
    mono = tuple(1 if k == i else 0 for k in range(m + 1))
    return HomPoly._rawh(field, m, 1, {mono: 1})


def linear_form(field: FieldSpec, coeffs: Sequence[int]) -> HomPoly:
    m = len(coeffs) - 1
    terms = {}
    for i, c in enumerate(coeffs):
        c = field._check(c)
        if c:
            terms[tuple(1 if k == i else 0 for k in range(m + 1))] = c
    return HomPoly._rawh(field, m, 1, terms)


def constant(field: FieldSpec, m: int, c: int = 1) -> HomPoly:
    return HomPoly(field, m, 0, {(0,) * (m + 1): c})


class PolyFamily:
    """Ordered list of homogeneous polynomials sharing field, m and d."""

    def __init__(self, members: Iterable[HomPoly], meta: dict | None = None):
        members = list(members)
        if not members:
            raise ValueError("empty family")
        f0 = members[0]
        for f in members[1:]:
            if f.field is not f0.field or f.m != f0.m or f.d != f0.d:
                raise MixedParameters("family members disagree on field, m or d")
        self.members = members
        self.meta = dict(meta or {})
        self._rank = None

    @property
    def field(self) -> FieldSpec:
        return self.members[0].field

    @property
    def m(self) -> int:
        return self.members[0].m

    @property
    def d(self) -> int:
        return self.members[0].d

    @property
    def r(self) -> int:
        return len(self.members)

    @property
    def rank(self) -> int:
        if self._rank is None:
            self._rank = rank(self)
        return self._rank

    def coefficient_matrix(self) -> np.ndarray:
        monos = monomials_desc_lex(self.m, self.d)
        return np.array([f.coefficient_vector(monos) for f in self.members], dtype=np.int64)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def __repr__(self):
        return f"PolyFamily(q={self.field.q}, m={self.m}, d={self.d}, r={self.r})"


# -- operations -----------------------------------------------------------------------

def eval_poly(f: Poly, point: Sequence[int]) -> int:
    F = f.field
    if len(point) != f.nvars:
        raise MixedParameters(f"point has {len(point)} coordinates, expected {f.nvars}")
    pt = [F._check(x) for x in point]
    acc = 0
    for mono, c in f.terms.items():
        v = c
        for x, e in zip(pt, mono):
            if e:
                v = F.fmul(v, F.pow(x, e))
        acc = F.fadd(acc, v)
    return acc


def rank(family: PolyFamily | Sequence[HomPoly]) -> int:
    if not isinstance(family, PolyFamily):
        family = PolyFamily(family)
    return matrix_rank(family.field, family.coefficient_matrix())


def _check_pair(f: Poly, g: Poly):
    if f.field is not g.field:
        raise FieldMismatch("polynomials over different fields")
    if f.nvars != g.nvars:
        raise MixedParameters("polynomials in different numbers of variables")


def _wrap(template: Poly, terms: dict) -> Poly:
    if isinstance(template, HomPoly):
        d = sum(next(iter(terms))) if terms else 0
        return HomPoly._rawh(template.field, template.m, d, terms)
    return Poly._raw(template.field, template.nvars, terms)


def _restrict_to_line(F: FieldSpec, a: Mapping, u: Sequence[int], v: Sequence[int]) -> dict:
    """The binary form a(s*u + t*v)."""
    deg = sum(next(iter(a)))
    pows = []
    for ui, vi in zip(u, v):
        lin = {k: c for k, c in {(1, 0): ui, (0, 1): vi}.items() if c}
        row = [{(0, 0): 1}]
        for _ in range(deg):
            row.append(_mul_terms(F, row[-1], lin))
        pows.append(row)
    out: dict = {}
    for mono, c in a.items():
        term = {(0, 0): c}
        for i, e in enumerate(mono):
            if e:
                term = _mul_terms(F, term, pows[i][e])
        _add_into(F, out, term)
    return out


def _surely_coprime(F: FieldSpec, f: Mapping, g: Mapping, n: int, tries: int = 4) -> bool:
    """True when some line meets V(f) and V(g) in no common point, even over the closure.

    A common factor of two forms survives restriction to any line not contained
    in its zero set, so a coprime restriction certifies coprimality.  False means
    only that no such line was found.
    """
    rng = random.Random(len(f) * 1_000_003 + len(g))
    for _ in range(tries):
        u = [rng.randrange(F.q) for _ in range(n)]
        v = [rng.randrange(F.q) for _ in range(n)]
        fl, gl = _restrict_to_line(F, f, u, v), _restrict_to_line(F, g, u, v)
        if fl and gl and _is_const(_gcd(F, fl, gl, 2)):
            return True
    return False


def _gcd_forms(F: FieldSpec, f: Mapping, g: Mapping, n: int) -> dict:
    """gcd of two nonzero forms: try a line certificate, else dehomogenise at x_0."""
    if n <= 2 or _is_const(f) or _is_const(g):
        return _gcd(F, f, g, n)
    if _surely_coprime(F, f, g, n):
        return {(0,) * n: 1}
    e = min(min(mono[0] for mono in f), min(mono[0] for mono in g))
    h = _gcd(F, {mono[1:]: c for mono, c in f.items()}, {mono[1:]: c for mono, c in g.items()}, n - 1)
    dh = max(sum(mono) for mono in h)
    return _monic(F, {(dh - sum(mono) + e,) + mono: c for mono, c in h.items()})


def gcd(f: Poly, g: Poly) -> Poly:
    """Greatest common divisor, normalised so the descending-lex leading coefficient is 1."""
    _check_pair(f, g)
    if isinstance(f, HomPoly) and isinstance(g, HomPoly) and f.terms and g.terms:
        return _wrap(f, _gcd_forms(f.field, f.terms, g.terms, f.nvars))
    return _wrap(f, _gcd(f.field, f.terms, g.terms, f.nvars))


def gcd_many(polys: Sequence[Poly]) -> Poly:
    polys = list(polys)
    if not polys or all(p.is_zero() for p in polys):
        raise AllZero("gcd of an all-zero family")
    for p in polys[1:]:
        _check_pair(polys[0], p)
    nonzero = [p for p in polys if not p.is_zero()]
    acc = nonzero[0].terms
    F, n = nonzero[0].field, nonzero[0].nvars
    acc = _monic(F, acc)
    for p in nonzero[1:]:
        if len(acc) == 1 and sum(next(iter(acc))) == 0:
            break
        if isinstance(p, HomPoly) and acc:
            acc = _gcd_forms(F, acc, p.terms, n)
        else:
            acc = _gcd(F, acc, p.terms, n)
    return _wrap(nonzero[0], acc)


def divide_exact(f: Poly, g: Poly) -> Poly:
    """h with f = g*h; raises NotDivisible otherwise."""
    _check_pair(f, g)
    q = _divmod_exact(f.field, f.terms, g.terms)
    if q is None:
        raise NotDivisible("divisor does not divide dividend")
    if isinstance(f, HomPoly) and isinstance(g, HomPoly):
        return HomPoly._rawh(f.field, f.m, f.d - g.d, q)
    return Poly._raw(f.field, f.nvars, q)


def divides(g: Poly, f: Poly) -> bool:
    _check_pair(f, g)
    return _divmod_exact(f.field, f.terms, g.terms) is not None


# -- text format --------------------------------------------------------------------

def format_poly(f: Poly) -> str:
    F = f.field
    if not f.terms:
        return "0"
    parts = []
    for mono in sorted(f.terms, reverse=True):
        c = f.terms[mono]
        factors = []
        for i, e in enumerate(mono):
            if e == 1:
                factors.append(f"x{i}")
            elif e > 1:
                factors.append(f"x{i}^{e}")
        if c != 1 or not factors:
            factors.insert(0, F.format(c))
        parts.append("*".join(factors))
    return " + ".join(parts)


_VAR = re.compile(r"^x_?(\d+)(?:\s*\^\s*(\d+))?$")


def parse_poly(text: str, field: FieldSpec, nvars: int | None = None, *, d: int | None = None,
               line: int | None = None) -> Poly:
    """Parse the ``c*x0^a0*x1^a1 + ...`` text format.

    Returns a HomPoly when ``d`` is given (or the parsed terms are homogeneous
    and nvars is given), else a Poly.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty polynomial", line, 1)
    raw_terms: list[tuple[int, dict[int, int], int]] = []
    pos = 0
    # split on '+' and on '-' that start a term
    chunks = []
    depth_start = 0
    i = 0
    while i < len(s):
        ch = s[i]
        if ch == "+" or (ch == "-" and i > 0 and s[:i].rstrip() and s[:i].rstrip()[-1] not in "*^"):
            chunks.append((depth_start, s[depth_start:i]))
            depth_start = i + 1 if ch == "+" else i
        i += 1
    chunks.append((depth_start, s[depth_start:]))
    for start, chunk in chunks:
        col = start + 1 + (len(chunk) - len(chunk.lstrip()))
        term = chunk.strip()
        if not term:
            raise ParseError("empty term", line, col)
        sign = 1
        if term.startswith("-"):
            sign = -1
            term = term[1:].strip()
        coeff = 1
        exps: dict[int, int] = {}
        for factor in term.split("*"):
            factor = factor.strip()
            if not factor:
                raise ParseError(f"empty factor in term {chunk.strip()!r}", line, col)
            mv = _VAR.match(factor)
            if mv:
                idx = int(mv.group(1))
                e = int(mv.group(2)) if mv.group(2) is not None else 1
                exps[idx] = exps.get(idx, 0) + e
                continue
            if factor.startswith("x"):
                raise ParseError(f"malformed variable {factor!r}", line, col)
            try:
                coeff = field.fmul(coeff, field.parse(factor))
            except ParseError as exc:
                raise ParseError(str(exc), line, col) from None
        if sign < 0:
            coeff = field.fneg(coeff)
        raw_terms.append((coeff, exps, col))
        pos += 1
    top = max((max(e) for _, e, _ in raw_terms if e), default=-1)
    if nvars is None:
        nvars = top + 1 if top >= 0 else 1
    elif top >= nvars:
        raise ParseError(f"variable x{top} out of range for {nvars} variables", line, 1)
    acc: dict = {}
    for coeff, exps, _ in raw_terms:
        mono = tuple(exps.get(k, 0) for k in range(nvars))
        _add_into(field, acc, {mono: coeff} if coeff else {})
    if d is not None:
        for mono in acc:
            if sum(mono) != d:
                raise ParseError(f"term {mono} is not of degree {d}", line, 1)
        return HomPoly._rawh(field, nvars - 1, d, acc)
    return Poly._raw(field, nvars, acc)
