"""Action of conformal generators on symbols of linear and bilinear operators.

A linear operator F_lam -> F_mu is identified with its symbol P(x, xi); a
bilinear operator F_lam x F_mu -> F_nu with P(x, xi, eta), xi standing for
derivatives of the first argument and eta for the second.

For translations, rotations and the dilation the action is the natural lift
to the cotangent copies plus the weight term ``delta * div(X) * P``.  The
inversions additionally carry the trace and Euler corrections.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .conformal import (
    INVERSION,
    Generator,
    Signature,
    divergence,
    euclidean_invariant,
    generator_components,
)
from .errors import ContractViolation
from .poly import ETA, Rational, SymbolPoly, Variable, X, XI, as_rational


@dataclass(frozen=True)
class LinearContext:
    sig: Signature
    lam: Rational
    mu: Rational

    def __post_init__(self):
        object.__setattr__(self, "lam", as_rational(self.lam))
        object.__setattr__(self, "mu", as_rational(self.mu))

    @property
    def n(self) -> int:
        return self.sig.n

    @property
    def delta(self) -> Rational:
        return self.mu - self.lam


@dataclass(frozen=True)
class BilinearContext:
    sig: Signature
    lam: Rational
    mu: Rational
    nu: Rational

    def __post_init__(self):
        for name in ("lam", "mu", "nu"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @property
    def n(self) -> int:
        return self.sig.n

    @property
    def delta(self) -> Rational:
        return self.nu - self.mu - self.lam


@lru_cache(maxsize=None)
def invariant_power(r: int, s: int, t: int, sig: Signature) -> SymbolPoly:
    """R^{r,s,t} = R_xixi^r R_xieta^s R_etaeta^t."""
    return (
        euclidean_invariant("R_xixi", sig) ** r
        * euclidean_invariant("R_xieta", sig) ** s
        * euclidean_invariant("R_etaeta", sig) ** t
    )


@lru_cache(maxsize=None)
def xi_power(k: int, sig: Signature) -> SymbolPoly:
    return euclidean_invariant("R_xixi", sig) ** k


def natural_lift(components, delta, P: SymbolPoly, families=(XI, ETA)) -> SymbolPoly:
    """X^j dP/dx^j - (d_a X^j) p_j dP/dp_a for each momentum family p, plus delta div(X) P.

    Exact for affine fields; for the inversions it is the first-order part only.
    """
    n = P.n
    out = SymbolPoly.zero(n)
    for j, c in enumerate(components, start=1):
        if c:
            out = out + c * P.diff(Variable(X, j))
    for a in range(1, n + 1):
        xa = Variable(X, a)
        for j, c in enumerate(components, start=1):
            dc = c.diff(xa)
            if not dc:
                continue
            for fam in families:
                dP = P.diff(Variable(fam, a))
                if dP:
                    out = out - dc * SymbolPoly.var(n, fam, j) * dP
    delta = as_rational(delta)
    if delta:
        out = out + divergence(components) * P * delta
    return out


def _inversion_lift(i: int, sig: Signature, delta: Rational, P: SymbolPoly, families) -> SymbolPoly:
    """L^delta for the i-th inversion, term by term as in the cotangent-lift formula."""
    n = sig.n
    x = [None] + [SymbolPoly.x(n, j) for j in range(1, n + 1)]
    x_low = [None] + [x[j] * sig.g(j) for j in range(1, n + 1)]
    r_xx = sum((x_low[j] * x[j] for j in range(1, n + 1)), SymbolPoly.zero(n))

    out = r_xx * P.diff(Variable(X, i))
    euler_x = SymbolPoly.zero(n)
    for j in range(1, n + 1):
        euler_x = euler_x + x[j] * P.diff(Variable(X, j))
    out = out - x_low[i] * euler_x * 2
    out = out - x_low[i] * P * (2 * n * delta)
    for fam in families:
        p = [None] + [SymbolPoly.var(n, fam, j) for j in range(1, n + 1)]
        rot = SymbolPoly.zero(n)
        x_dot_p = SymbolPoly.zero(n)
        for j in range(1, n + 1):
            rot = rot + (p[i] * x_low[j] - p[j] * x_low[i]) * P.diff(Variable(fam, j))
            x_dot_p = x_dot_p + p[j] * x[j]
        out = out - rot * 2
        out = out + x_dot_p * P.diff(Variable(fam, i)) * (2 * sig.g(i))
    return out


def _inversion_correction(i: int, sig: Signature, P: SymbolPoly, fam: int, weight: Rational) -> SymbolPoly:
    """-p_i T_p(P) + 2 (E_p + n w) d/dp^i P."""
    n = sig.n
    trace = SymbolPoly.zero(n)
    euler = SymbolPoly.zero(n)
    d_up = P.diff(Variable(fam, i)) * sig.g(i)
    for j in range(1, n + 1):
        v = Variable(fam, j)
        trace = trace + P.diff(v).diff(v) * sig.g(j)
        euler = euler + SymbolPoly.var(n, fam, j) * d_up.diff(v)
    return -(SymbolPoly.var(n, fam, i) * trace) + (euler + d_up * (n * weight)) * 2


def _act(gen: Generator, delta: Rational, weights: dict, P: SymbolPoly) -> SymbolPoly:
    sig = gen.sig
    if P.n != sig.n:
        raise ContractViolation(f"dimension mismatch: symbol n={P.n}, generator n={sig.n}")
    families = tuple(weights)
    if gen.kind != INVERSION:
        return natural_lift(generator_components(gen), delta, P, families)
    (i,) = gen.indices
    out = _inversion_lift(i, sig, delta, P, families)
    for fam, w in weights.items():
        out = out + _inversion_correction(i, sig, P, fam, w)
    return out


def act_linear(gen: Generator, ctx: LinearContext, P: SymbolPoly) -> SymbolPoly:
    """Symbol of L^mu_X o A - A o L^lam_X for the operator A with symbol P(x, xi)."""
    if ETA in P.families():
        raise ContractViolation("linear symbols must not involve eta")
    if gen.sig != ctx.sig:
        raise ContractViolation("generator and context use different signatures")
    return _act(gen, ctx.delta, {XI: ctx.lam}, P)


def act_bilinear(gen: Generator, ctx: BilinearContext, P: SymbolPoly) -> SymbolPoly:
    """Symbol of L^nu_X B(f, g) - B(L^lam_X f, g) - B(f, L^mu_X g)."""
    if gen.sig != ctx.sig:
        raise ContractViolation("generator and context use different signatures")
    return _act(gen, ctx.delta, {XI: ctx.lam, ETA: ctx.mu}, P)


def inversion_monomial_expansion(r: int, s: int, t: int, ctx: BilinearContext) -> list:
    """Closed form of an inversion applied to R^{r,s,t}.

    Returns ``(slot, (r', s', t'), coefficient)`` triples meaning
    ``coefficient * slot_i * R^{r',s',t'}`` with ``slot`` one of ``"x"``, ``"xi"``,
    ``"eta"``.  Entries whose target exponent would be negative are dropped
    (their coefficient vanishes).
    """
    n, lam, mu = ctx.n, ctx.lam, ctx.mu
    k = r + s + t
    raw = [
        ("x", (r, s, t), 2 * (2 * k - n * ctx.delta)),
        ("xi", (r - 1, s, t), 2 * r * (2 * r + n * (2 * lam - 1))),
        ("xi", (r, s - 2, t + 1), -s * (s - 1)),
        ("xi", (r, s - 1, t), 2 * s * (s + 2 * t + n * mu - 1)),
        ("eta", (r, s, t - 1), 2 * t * (2 * t + n * (2 * mu - 1))),
        ("eta", (r + 1, s - 2, t), -s * (s - 1)),
        ("eta", (r, s - 1, t), 2 * s * (s + 2 * r + n * lam - 1)),
    ]
    return [(slot, rst, Rational(c)) for slot, rst, c in raw if min(rst) >= 0]


def expansion_to_poly(expansion: list, i: int, sig: Signature) -> SymbolPoly:
    n = sig.n
    slot_var = {
        "x": SymbolPoly.x(n, i) * sig.g(i),
        "xi": SymbolPoly.xi(n, i),
        "eta": SymbolPoly.eta(n, i),
    }
    out = SymbolPoly.zero(n)
    for slot, (r, s, t), c in expansion:
        if c:
            out = out + slot_var[slot] * invariant_power(r, s, t, sig) * c
    return out
