"""Flat metric of signature (p, q), the conformal vector fields and densities.

Storage convention: x carries upper indices, xi and eta carry lower indices.
Lowering/raising is multiplication by the diagonal entry ``g_ii = +-1``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations

from . import linalg
from .errors import ContractViolation
from .poly import ETA, Rational, SymbolPoly, Variable, X, XI, as_rational

Weight = Rational

TRANSLATION = "translation"
ROTATION = "rotation"
DILATION = "dilation"
INVERSION = "inversion"


@dataclass(frozen=True)
class Signature:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q < 1:
            raise ContractViolation(f"invalid signature ({self.p},{self.q})")

    @property
    def n(self) -> int:
        return self.p + self.q

    def g(self, i: int) -> int:
        """Diagonal entry g_ii (equal to g^ii)."""
        if not 1 <= i <= self.n:
            raise ContractViolation(f"index {i} out of range 1..{self.n}")
        return 1 if i <= self.p else -1

    @classmethod
    def parse(cls, text: str) -> "Signature":
        m = re.fullmatch(r"\s*(\d+)\s*,\s*(\d+)\s*", text)
        if not m:
            raise ValueError(f"signature must look like 'p,q', got {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    @classmethod
    def euclidean(cls, n: int) -> "Signature":
        return cls(n, 0)

    def __str__(self):
        return f"{self.p},{self.q}"


def metric_entry(sig: Signature, i: int, j: int) -> Rational:
    gi = sig.g(i)
    sig.g(j)
    return Rational(gi) if i == j else Rational(0)


@dataclass(frozen=True)
class Generator:
    kind: str
    indices: tuple
    sig: Signature

    def __post_init__(self):
        n = self.sig.n
        want = {TRANSLATION: 1, ROTATION: 2, DILATION: 0, INVERSION: 1}
        if self.kind not in want:
            raise ContractViolation(f"unknown generator kind {self.kind!r}")
        if len(self.indices) != want[self.kind]:
            raise ContractViolation(f"{self.kind} takes {want[self.kind]} indices")
        if any(not 1 <= i <= n for i in self.indices):
            raise ContractViolation(f"generator index out of range 1..{n}")
        if self.kind == ROTATION and not self.indices[0] < self.indices[1]:
            raise ContractViolation("rotation indices must satisfy i < j")

    @classmethod
    def translation(cls, sig, i):
        return cls(TRANSLATION, (i,), sig)

    @classmethod
    def rotation(cls, sig, i, j):
        return cls(ROTATION, (i, j), sig)

    @classmethod
    def dilation(cls, sig):
        return cls(DILATION, (), sig)

    @classmethod
    def inversion(cls, sig, i):
        return cls(INVERSION, (i,), sig)

    @property
    def label(self) -> str:
        if self.kind == DILATION:
            return DILATION
        return f"{self.kind}({','.join(map(str, self.indices))})"

    def __str__(self):
        return self.label

    @classmethod
    def parse(cls, text: str, sig: Signature) -> "Generator":
        m = re.fullmatch(r"\s*(\w+)\s*(?:\(([\d,\s]*)\))?\s*", text)
        if not m:
            raise ValueError(f"bad generator {text!r}")
        idx = tuple(int(t) for t in (m.group(2) or "").split(",") if t.strip())
        return cls(m.group(1), idx, sig)


def generators(sig: Signature) -> list:
    """Translations, rotations (i<j), the dilation, inversions; n + n(n-1)/2 + 1 + n in all."""
    n = sig.n
    out = [Generator.translation(sig, i) for i in range(1, n + 1)]
    out += [Generator.rotation(sig, i, j) for i, j in combinations(range(1, n + 1), 2)]
    out.append(Generator.dilation(sig))
    out += [Generator.inversion(sig, i) for i in range(1, n + 1)]
    return out


def _squared_norm(sig: Signature) -> SymbolPoly:
    n = sig.n
    return SymbolPoly(n, {((Variable(X, i), 2),): sig.g(i) for i in range(1, n + 1)})


def generator_components(gen: Generator) -> tuple:
    """Components X^k(x) of the vector field X = X^k d/dx^k."""
    sig = gen.sig
    n = sig.n
    zero = SymbolPoly.zero(n)
    comps = [zero] * n
    if gen.kind == TRANSLATION:
        (i,) = gen.indices
        comps[i - 1] = SymbolPoly.constant(n, 1)
    elif gen.kind == ROTATION:
        # x_i d_j - x_j d_i with x_i = g_ii x^i
        i, j = gen.indices
        comps[j - 1] = SymbolPoly.x(n, i) * sig.g(i)
        comps[i - 1] = SymbolPoly.x(n, j) * (-sig.g(j))
    elif gen.kind == DILATION:
        comps = [SymbolPoly.x(n, k) for k in range(1, n + 1)]
    else:
        # x_j x^j d_i - 2 x_i x^j d_j
        (i,) = gen.indices
        x_low_i = SymbolPoly.x(n, i) * (2 * sig.g(i))
        comps = [x_low_i * SymbolPoly.x(n, k) for k in range(1, n + 1)]
        comps = [-c for c in comps]
        comps[i - 1] = comps[i - 1] + _squared_norm(sig)
    return tuple(comps)


def divergence(components) -> SymbolPoly:
    n = len(components)
    out = SymbolPoly.zero(n)
    for k, c in enumerate(components, start=1):
        out = out + c.diff(Variable(X, k))
    return out


def _require_x_only(f: SymbolPoly):
    if f.families() - {X}:
        raise ContractViolation("density coefficient must involve x variables only")


def lie_derivative_field(components, lam, f: SymbolPoly) -> SymbolPoly:
    """X^i df/dx^i + lam (d_i X^i) f for an arbitrary polynomial vector field."""
    _require_x_only(f)
    lam = as_rational(lam)
    out = divergence(components) * f * lam if lam else SymbolPoly.zero(f.n)
    for k, c in enumerate(components, start=1):
        if c:
            out = out + c * f.diff(Variable(X, k))
    return out


def lie_derivative_density(gen: Generator, lam, f: SymbolPoly) -> SymbolPoly:
    if f.n != gen.sig.n:
        raise ContractViolation(f"dimension mismatch: {f.n} vs {gen.sig.n}")
    return lie_derivative_field(generator_components(gen), lam, f)


_INVARIANT_FAMILIES = {
    "R_xx": (X, X),
    "R_xxi": (X, XI),
    "R_xixi": (XI, XI),
    "R_xieta": (XI, ETA),
    "R_etaeta": (ETA, ETA),
}
EUCLIDEAN_INVARIANTS = tuple(_INVARIANT_FAMILIES)


def euclidean_invariant(which: str, sig: Signature) -> SymbolPoly:
    """One of R_xx, R_xxi, R_xixi, R_xieta, R_etaeta.

    R_xxi = x^i xi_i needs no metric; the others contract with the diagonal metric.
    """
    try:
        fa, fb = _INVARIANT_FAMILIES[which]
    except KeyError:
        raise ContractViolation(f"unknown invariant {which!r}") from None
    n = sig.n
    terms: dict = {}
    for i in range(1, n + 1):
        a, b = Variable(fa, i), Variable(fb, i)
        mono = ((a, 2),) if a == b else tuple(sorted(((a, 1), (b, 1))))
        terms[mono] = 1 if (fa, fb) == (X, XI) else sig.g(i)
    return SymbolPoly(n, terms)


def commutator(a, b) -> tuple:
    """Componentwise [X, Y]^k = X^i d_i Y^k - Y^i d_i X^k."""
    n = len(a)
    out = []
    for k in range(n):
        c = SymbolPoly.zero(n)
        for i in range(n):
            v = Variable(X, i + 1)
            if a[i]:
                c = c + a[i] * b[k].diff(v)
            if b[i]:
                c = c - b[i] * a[k].diff(v)
        out.append(c)
    return tuple(out)


def span_coefficients(field, sig: Signature) -> dict | None:
    """Express a polynomial vector field in the generator basis, or None if outside the span."""
    gens = generators(sig)
    comps = [generator_components(g) for g in gens]
    rows: dict = {}
    rhs: dict = {}
    for col, cs in enumerate(comps):
        for k, c in enumerate(cs):
            for mono, v in c.terms.items():
                rows.setdefault((k, mono), {})[col] = v
    for k, c in enumerate(field):
        for mono, v in c.terms.items():
            rhs[(k, mono)] = v
            rows.setdefault((k, mono), {})
    keys = list(rows)
    sol = linalg.solve([rows[key] for key in keys], [rhs.get(key, 0) for key in keys], len(gens))
    if sol is None:
        return None
    return {g: v for g, v in zip(gens, sol) if v}


def bracket_in_basis(x: Generator, y: Generator) -> dict:
    """[X, Y] written in the generator basis; raises if the algebra failed to close."""
    if x.sig != y.sig:
        raise ContractViolation("generators from different signatures")
    field = commutator(generator_components(x), generator_components(y))
    coeffs = span_coefficients(field, x.sig)
    if coeffs is None:
        raise ArithmeticError(f"[{x}, {y}] is not in the span of the conformal generators")
    return coeffs
