"""One-dimensional layer: Gordan transvectants and f -> f^(k) under sl(2).

Kept separate from the n-dimensional engine: on the line odd orders occur
as well, which the conformal R_xixi / R_xieta / R_etaeta calculus cannot see.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from math import factorial

from .poly import X, Rational, as_rational, parse_poly


@dataclass(frozen=True)
class Poly1D:
    """Univariate polynomial, coefficients from the constant term up."""

    coeffs: tuple = ()

    def __post_init__(self):
        cs = [as_rational(c) for c in self.coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, d: int, c=1) -> "Poly1D":
        return cls((0,) * d + (c,))

    @classmethod
    def parse(cls, text: str) -> "Poly1D":
        """Same grammar as the n-dimensional polynomials; ``x`` is accepted for ``x1``."""
        p = parse_poly(re.sub(r"\bx\b", "x1", text), 1)
        coeffs: dict = {}
        for mono, c in p.terms.items():
            if any(v.family != X for v, _ in mono):
                raise ValueError(f"1D polynomial may only use x: {text!r}")
            coeffs[sum(e for _, e in mono)] = c
        top = max(coeffs, default=-1)
        return cls(tuple(coeffs.get(d, 0) for d in range(top + 1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def derivative(self, k: int = 1) -> "Poly1D":
        cs = self.coeffs
        for _ in range(k):
            cs = tuple(d * c for d, c in enumerate(cs) if d)
        return Poly1D(cs)

    def __add__(self, other: "Poly1D") -> "Poly1D":
        m = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (m - len(self.coeffs))
        b = other.coeffs + (0,) * (m - len(other.coeffs))
        return Poly1D(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self):
        return Poly1D(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly1D):
            c = as_rational(other)
            return Poly1D(tuple(c * v for v in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return Poly1D()
        out = [Rational(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly1D(tuple(out))

    __rmul__ = __mul__

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if not c:
                continue
            body = "" if d == 0 else ("x" if d == 1 else f"x^{d}")
            a = abs(c)
            text = str(a) if not body else (body if a == 1 else f"{a}*{body}")
            parts.append(("-" if c < 0 else "+", text))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out


def generalized_binomial(a, i: int) -> Rational:
    """a(a-1)...(a-i+1)/i! for rational a."""
    a = as_rational(a)
    num = Rational(1)
    for j in range(i):
        num *= a - j
    return num / factorial(i)


def transvectant_coefficients(k: int, lam, mu) -> list:
    """Coefficient of f^(i) g^(k-i), i = 0..k: (-1)^i C(2mu+k-1, i) C(2lam+k-1, k-i)."""
    lam, mu = as_rational(lam), as_rational(mu)
    return [
        (-1) ** i * generalized_binomial(2 * mu + k - 1, i) * generalized_binomial(2 * lam + k - 1, k - i)
        for i in range(k + 1)
    ]


def apply_transvectant(k: int, lam, mu, f: Poly1D, g: Poly1D) -> Poly1D:
    """B_k(f, g); the result is a density of weight lam + mu + k."""
    out = Poly1D()
    for i, c in enumerate(transvectant_coefficients(k, lam, mu)):
        if c:
            out = out + f.derivative(i) * g.derivative(k - i) * c
    return out


SL2_FIELDS = {
    "d/dx": Poly1D((1,)),
    "x d/dx": Poly1D((0, 1)),
    "x^2 d/dx": Poly1D((0, 0, 1)),
}


def lie_derivative_1d(field: Poly1D, lam, f: Poly1D) -> Poly1D:
    """X f' + lam X' f."""
    return field * f.derivative() + field.derivative() * f * as_rational(lam)


def sl2_residual(k: int, lam, mu, degree: int | None = None) -> list:
    """Records ``(field, f, g, residual)`` where B_k fails to commute with sl(2).

    Checked on monomial pairs of degree <= ``degree`` (default 2k + 2); an
    empty list means invariant.
    """
    lam, mu = as_rational(lam), as_rational(mu)
    nu = lam + mu + k
    d = 2 * k + 2 if degree is None else degree
    monos = [Poly1D.monomial(j) for j in range(d + 1)]
    out = []
    for name, X_ in SL2_FIELDS.items():
        for f in monos:
            for g in monos:
                res = (
                    lie_derivative_1d(X_, nu, apply_transvectant(k, lam, mu, f, g))
                    - apply_transvectant(k, lam, mu, lie_derivative_1d(X_, lam, f), g)
                    - apply_transvectant(k, lam, mu, f, lie_derivative_1d(X_, mu, g))
                )
                if res:
                    out.append((name, f, g, res))
    return out


def derivative_residual(k: int, lam, degree: int | None = None) -> list:
    """Records ``(field, f, residual)`` where f -> f^(k) from weight lam to lam + k is not equivariant."""
    lam = as_rational(lam)
    d = 2 * k + 2 if degree is None else degree
    out = []
    for name, X_ in SL2_FIELDS.items():
        for j in range(d + 1):
            f = Poly1D.monomial(j)
            res = lie_derivative_1d(X_, lam + k, f.derivative(k)) - lie_derivative_1d(X_, lam, f).derivative(k)
            if res:
                out.append((name, f, res))
    return out


def derivative_weight(k: int) -> Rational:
    """The source weight (1 - k)/2 at which f -> f^(k) is sl(2)-equivariant."""
    return Rational(1 - k, 2)
