"""Invariance checked on actual densities, without the symbol-level formulas.

Operators are applied to polynomial densities by turning each contraction
into metric-weighted derivatives, and invariance is tested straight from
the definition

    L^nu_X B(f, g) - B(L^lam_X f, g) - B(f, L^mu_X g) = 0

on every pair of x-monomials up to a degree bound.  Nothing here imports
the symbol-action module.
"""
from __future__ import annotations

from dataclasses import dataclass

from .conformal import Generator, Signature, lie_derivative_density
from .conformal import generators as all_generators
from .errors import ContractViolation
from .poly import Rational, SymbolPoly, Variable, X, as_rational, monomials_up_to


@dataclass(frozen=True)
class DensityPoly:
    coeff: SymbolPoly
    weight: Rational

    def __post_init__(self):
        if self.coeff.families() - {X}:
            raise ContractViolation("density coefficient must involve x variables only")
        object.__setattr__(self, "weight", as_rational(self.weight))


def laplacian(f: SymbolPoly, sig: Signature) -> SymbolPoly:
    out = SymbolPoly.zero(f.n)
    for a in range(1, sig.n + 1):
        v = Variable(X, a)
        out = out + f.diff(v).diff(v) * sig.g(a)
    return out


def _laplacian_power(f: SymbolPoly, sig: Signature, k: int) -> SymbolPoly:
    for _ in range(k):
        if not f:
            break
        f = laplacian(f, sig)
    return f


def _contraction_side(F: SymbolPoly, sig: Signature, s: int, weighted: bool) -> list:
    """d_{a1}..d_{as} F for every index tuple (lexicographic), times g^{a1 a1}..g^{as as} if weighted.

    Built one pairing at a time: each step differentiates every entry once more.
    """
    chains = [(F, 1)]
    for _ in range(s):
        chains = [
            (G.diff(Variable(X, a)), w * (sig.g(a) if weighted else 1))
            for G, w in chains
            for a in range(1, sig.n + 1)
        ]
    return [G * w if w != 1 else G for G, w in chains]


def _pair_sum(left: list, right: list, n: int) -> SymbolPoly:
    out = SymbolPoly.zero(n)
    for F, G in zip(left, right):
        if F and G:
            out = out + F * G
    return out


def _apply_entries(entries: dict, sig: Signature, f: SymbolPoly, g: SymbolPoly) -> SymbolPoly:
    out = SymbolPoly.zero(sig.n)
    for (r, s, t), c in entries.items():
        left = _contraction_side(_laplacian_power(f, sig, r), sig, s, True)
        right = _contraction_side(_laplacian_power(g, sig, t), sig, s, False)
        out = out + _pair_sum(left, right, sig.n) * c
    return out


def apply_bilinear(B, f: DensityPoly, g: DensityPoly) -> DensityPoly:
    """B(f, g) for a bilinear operator ``B`` with constant coefficients c_rst."""
    ctx = B.ctx
    if f.weight != ctx.lam or g.weight != ctx.mu:
        raise ContractViolation(
            f"weight mismatch: operator expects ({ctx.lam}, {ctx.mu}), got ({f.weight}, {g.weight})"
        )
    return DensityPoly(_apply_entries(B.table.entries, ctx.sig, f.coeff, g.coeff), ctx.nu)


def apply_linear(k: int, sig: Signature, f: DensityPoly) -> DensityPoly:
    """k-fold metric Laplacian; the result carries weight ``f.weight + 2k/n``."""
    return DensityPoly(_laplacian_power(f.coeff, sig, k), f.weight + Rational(2 * k, sig.n))


class _PairCache:
    """B on monomial pairs, extended bilinearly.

    Same arithmetic as :func:`_apply_entries`, with the per-monomial derivative
    chains memoized.
    """

    def __init__(self, entries, sig):
        self.entries = entries
        self.sig = sig
        self.sides: dict = {}
        self.cache: dict = {}

    def _side(self, mono, power, s, weighted):
        key = (mono, power, s, weighted)
        hit = self.sides.get(key)
        if hit is None:
            F = _laplacian_power(SymbolPoly(self.sig.n, {mono: 1}), self.sig, power)
            hit = self.sides[key] = _contraction_side(F, self.sig, s, weighted)
        return hit

    def monomial_pair(self, m1, m2) -> SymbolPoly:
        key = (m1, m2)
        hit = self.cache.get(key)
        if hit is None:
            n = self.sig.n
            hit = SymbolPoly.zero(n)
            for (r, s, t), c in self.entries.items():
                part = _pair_sum(self._side(m1, r, s, True), self._side(m2, t, s, False), n)
                if part:
                    hit = hit + part * c
            self.cache[key] = hit
        return hit

    def __call__(self, f: SymbolPoly, g: SymbolPoly) -> SymbolPoly:
        out = SymbolPoly.zero(self.sig.n)
        for m1, c1 in f.terms.items():
            for m2, c2 in g.terms.items():
                p = self.monomial_pair(m1, m2)
                if p:
                    out = out + p * (c1 * c2)
        return out


def _x_monomials(n: int, d: int) -> list:
    return monomials_up_to([Variable(X, i) for i in range(1, n + 1)], d)


def oracle_residual(B, gen: Generator, d: int, *, _cache=None) -> list:
    """Nonzero residuals ``(f, g, residual)`` over x-monomial pairs of degree <= d."""
    ctx = B.ctx
    if gen.sig != ctx.sig:
        raise ContractViolation("generator and operator use different signatures")
    n = ctx.sig.n
    apply = _cache if _cache is not None else _PairCache(B.table.entries, ctx.sig)
    monos = _x_monomials(n, d)
    lifted = {m: lie_derivative_density(gen, ctx.lam, SymbolPoly(n, {m: 1})) for m in monos}
    lifted_g = (
        lifted if ctx.mu == ctx.lam
        else {m: lie_derivative_density(gen, ctx.mu, SymbolPoly(n, {m: 1})) for m in monos}
    )
    out = []
    for m1 in monos:
        f = SymbolPoly(n, {m1: 1})
        for m2 in monos:
            g = SymbolPoly(n, {m2: 1})
            res = (
                lie_derivative_density(gen, ctx.nu, apply.monomial_pair(m1, m2))
                - apply(lifted[m1], g)
                - apply(f, lifted_g[m2])
            )
            if res:
                out.append((f, g, res))
    return out


def oracle_report(B, d: int | None = None, generators=None) -> dict:
    """Run :func:`oracle_residual` for every generator; ``d`` defaults to 2k+2."""
    if d is None:
        d = 2 * B.table.k + 2
    cache = _PairCache(B.table.entries, B.ctx.sig)
    gens = generators if generators is not None else all_generators(B.ctx.sig)
    return {gen: oracle_residual(B, gen, d, _cache=cache) for gen in gens}


def linear_oracle_residual(k: int, ctx, gen: Generator, d: int) -> list:
    """Nonzero ``(f, residual)`` for L^mu(Delta^k f) - Delta^k(L^lam f), deg f <= d."""
    sig = ctx.sig
    n = sig.n
    out = []
    for m in _x_monomials(n, d):
        f = SymbolPoly(n, {m: 1})
        res = lie_derivative_density(gen, ctx.mu, _laplacian_power(f, sig, k)) - _laplacian_power(
            lie_derivative_density(gen, ctx.lam, f), sig, k
        )
        if res:
            out.append((f, res))
    return out
