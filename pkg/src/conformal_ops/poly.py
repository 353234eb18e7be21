"""Exact rationals and sparse polynomials in x^1..x^n, xi_1..xi_n, eta_1..eta_n.

A monomial is a tuple of ``(Variable, exponent)`` pairs sorted by variable,
holding only nonzero exponents.  A :class:`SymbolPoly` maps monomials to
nonzero exact coefficients and never changes after construction.  ``Rational``
is ``gmpy2.mpq`` when available, else :class:`fractions.Fraction`; integral
coefficients may be stored as plain ``int``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Union

from .errors import ContractViolation

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    Rational = Fraction

RATIONAL_TYPES = (Fraction, type(Rational(0)))

X, XI, ETA = 0, 1, 2
FAMILY_NAMES = ("x", "xi", "eta")
_FAMILY_BY_NAME = {name: fam for fam, name in enumerate(FAMILY_NAMES)}


class Variable(NamedTuple):
    family: int
    index: int

    def __str__(self):
        return f"{FAMILY_NAMES[self.family]}{self.index}"


Monomial = tuple  # tuple[tuple[Variable, int], ...]
Scalar = Union[int, "Rational"]

_RATIONAL_RE = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*\Z")


def parse_rational(text: str) -> Rational:
    """Parse ``p/q`` or an integer.  Decimal and float notation is rejected."""
    m = _RATIONAL_RE.match(str(text))
    if m is None:
        raise ValueError(f"not an exact rational: {text!r} (use p/q)")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Rational(int(num), int(den) if den else 1)


def as_rational(value) -> Rational:
    if isinstance(value, RATIONAL_TYPES) or (isinstance(value, int) and not isinstance(value, bool)):
        return Rational(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def _exact(value):
    # integral coefficients may stay plain ints; they compare and hash equal to rationals
    if type(value) is int:
        return value
    return as_rational(value)


def format_rational(q) -> str:
    return str(q)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for v, e in b:
        merged[v] = merged.get(v, 0) + e
    return tuple(sorted(merged.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class SymbolPoly:
    __slots__ = ("_terms", "n", "_hash")

    def __init__(self, n: int, terms: Mapping[Monomial, Scalar] | None = None):
        if n < 1:
            raise ContractViolation(f"dimension must be >= 1, got {n}")
        self.n = n
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = _exact(c)
                if c:
                    for v, e in mono:
                        if not 1 <= v.index <= n or e <= 0:
                            raise ContractViolation(f"bad factor {v}^{e} for n={n}")
                    clean[tuple(sorted(mono))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "SymbolPoly":
        # terms must already be canonical: sorted monomials, nonzero rationals
        obj = cls.__new__(cls)
        obj.n = n
        obj._terms = terms
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def zero(cls, n: int) -> "SymbolPoly":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c: Scalar) -> "SymbolPoly":
        c = _exact(c)
        return cls._raw(n, {(): c} if c else {})

    @classmethod
    def var(cls, n: int, family: int, index: int) -> "SymbolPoly":
        if not 1 <= index <= n:
            raise ContractViolation(f"index {index} out of range 1..{n}")
        return cls._raw(n, {((Variable(family, index), 1),): 1})

    @classmethod
    def x(cls, n: int, i: int) -> "SymbolPoly":
        return cls.var(n, X, i)

    @classmethod
    def xi(cls, n: int, i: int) -> "SymbolPoly":
        return cls.var(n, XI, i)

    @classmethod
    def eta(cls, n: int, i: int) -> "SymbolPoly":
        return cls.var(n, ETA, i)

    # inspection

    @property
    def terms(self) -> Mapping[Monomial, Rational]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def coefficient(self, mono: Monomial) -> Rational:
        return Rational(self._terms.get(tuple(sorted(mono)), 0))

    def degree(self) -> int:
        return max((mono_degree(m) for m in self._terms), default=-1)

    def families(self) -> set:
        return {v.family for m in self._terms for v, _ in m}

    def constant_term(self) -> Rational:
        return Rational(self._terms.get((), 0))

    # arithmetic

    def _check(self, other: "SymbolPoly"):
        if other.n != self.n:
            raise ContractViolation(f"dimension mismatch: {self.n} vs {other.n}")

    def _coerce(self, other) -> "SymbolPoly":
        if isinstance(other, SymbolPoly):
            self._check(other)
            return other
        if isinstance(other, (int,) + RATIONAL_TYPES):
            return SymbolPoly.constant(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return SymbolPoly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return SymbolPoly._raw(self.n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "SymbolPoly":
        c = _exact(c)
        if not c:
            return SymbolPoly.zero(self.n)
        return SymbolPoly._raw(self.n, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int,) + RATIONAL_TYPES):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return SymbolPoly._raw(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ContractViolation("exponent must be a nonnegative integer")
        result = SymbolPoly.constant(self.n, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def diff(self, v: Variable) -> "SymbolPoly":
        if not 1 <= v.index <= self.n:
            raise ContractViolation(f"variable {v} out of range for n={self.n}")
        out: dict = {}
        for m, c in self._terms.items():
            for pos, (w, e) in enumerate(m):
                if w == v:
                    if e == 1:
                        dm = m[:pos] + m[pos + 1:]
                    else:
                        dm = m[:pos] + ((w, e - 1),) + m[pos + 1:]
                    out[dm] = out.get(dm, 0) + c * e
                    break
        return SymbolPoly._raw(self.n, {m: c for m, c in out.items() if c})

    # comparison

    def __eq__(self, other):
        if isinstance(other, (int,) + RATIONAL_TYPES):
            other = SymbolPoly.constant(self.n, other)
        if not isinstance(other, SymbolPoly):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    # ordering and text

    def _order_key(self, mono: Monomial):
        n = self.n
        dense = [0] * (3 * n)
        for v, e in mono:
            dense[v.family * n + v.index - 1] = e
        return (-sum(dense), tuple(-e for e in dense))

    def sorted_terms(self) -> list:
        """Terms in graded-lex order (highest degree first, x before xi before eta)."""
        return sorted(self._terms.items(), key=lambda mc: self._order_key(mc[0]))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"SymbolPoly(n={self.n}, {format_poly(self)!r})"


def format_monomial(mono: Monomial) -> str:
    return "*".join(f"{v}^{e}" if e > 1 else str(v) for v, e in mono)


def format_poly(p: SymbolPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for mono, c in p.sorted_terms():
        c = Rational(c)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = format_monomial(mono)
        if not body:
            text = str(a)
        elif a == 1:
            text = body
        else:
            text = f"{a}*{body}"
        parts.append((sign, text))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>xi|eta|x)(?P<idx>\d+)(?:\^(?P<exp>\d+))?|(?P<op>[-+*]))"
)


def parse_poly(text: str, n: int | None = None) -> SymbolPoly:
    """Parse e.g. ``3/2*x1^2*xi2 - eta1``.

    If ``n`` is omitted the dimension is the largest index that appears (at least 1).
    """
    text = text.strip()
    pos = 0
    terms: list = []
    sign, coef, factors = 1, 1, []
    last = "start"  # start | sign | star | factor
    max_index = 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at {text[pos:]!r}")
        pos = m.end()
        op = m.group("op")
        if op in ("+", "-"):
            if last == "factor":
                terms.append((sign * coef, factors))
            elif last != "start":
                raise ValueError(f"misplaced {op!r} in {text!r}")
            sign, coef, factors, last = (-1 if op == "-" else 1), 1, [], "sign"
            continue
        if op == "*":
            if last != "factor":
                raise ValueError(f"misplaced '*' in {text!r}")
            last = "star"
            continue
        if last == "factor":
            raise ValueError(f"missing '*' between factors in {text!r}")
        if m.group("num") is not None:
            coef *= parse_rational(m.group("num"))
        else:
            idx = int(m.group("idx"))
            if idx < 1:
                raise ValueError(f"variable index must be >= 1 in {text!r}")
            max_index = max(max_index, idx)
            factors.append((Variable(_FAMILY_BY_NAME[m.group("var")], idx), int(m.group("exp") or 1)))
        last = "factor"
    if last != "factor":
        raise ValueError(f"incomplete polynomial {text!r}")
    terms.append((sign * coef, factors))
    if n is None:
        n = max_index
    elif max_index > n:
        raise ContractViolation(f"index {max_index} exceeds dimension {n}")
    out: dict = {}
    for c, fs in terms:
        mono: dict = {}
        for v, e in fs:
            if e:
                mono[v] = mono.get(v, 0) + e
        key = tuple(sorted(mono.items()))
        out[key] = out.get(key, 0) + c
    return SymbolPoly(n, out)


def poly_arith(a: SymbolPoly, b: SymbolPoly, op: str) -> SymbolPoly:
    if a.n != b.n:
        raise ContractViolation(f"dimension mismatch: {a.n} vs {b.n}")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def poly_diff(p: SymbolPoly, v: Variable) -> SymbolPoly:
    return p.diff(v)


def poly_is_zero(p: SymbolPoly) -> bool:
    return p.is_zero()


def poly_sum(polys: Iterable[SymbolPoly], n: int) -> SymbolPoly:
    out: dict = {}
    for p in polys:
        for m, c in p._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return SymbolPoly._raw(n, out)


def monomials_up_to(variables: list, degree: int) -> list:
    """All monomials in ``variables`` with total degree <= ``degree``."""
    out = [()]
    frontier = [((), 0, 0)]
    while frontier:
        nxt = []
        for mono, deg, start in frontier:
            if deg == degree:
                continue
            for k in range(start, len(variables)):
                d = dict(mono)
                d[variables[k]] = d.get(variables[k], 0) + 1
                m = tuple(sorted(d.items()))
                out.append(m)
                nxt.append((m, deg + 1, k))
        frontier = nxt
    return out
