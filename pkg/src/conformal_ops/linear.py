"""Invariant linear operators F_lam -> F_mu: powers of the Laplacian."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .action import LinearContext, act_linear, xi_power
from .conformal import ROTATION, TRANSLATION, Signature, generators
from .poly import X, XI, Rational, SymbolPoly, Variable, as_rational, mono_mul, monomials_up_to


@dataclass(frozen=True)
class LinearOperatorSymbol:
    """sum_k c_k R_xixi^k between the weights of ``ctx``."""

    ctx: LinearContext
    coefficients: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(k): as_rational(c) for k, c in self.coefficients.items() if c}
        object.__setattr__(self, "coefficients", dict(sorted(clean.items())))

    @property
    def order(self) -> int:
        return 2 * max(self.coefficients, default=0)

    def symbol(self) -> SymbolPoly:
        out = SymbolPoly.zero(self.ctx.n)
        for k, c in self.coefficients.items():
            out = out + xi_power(k, self.ctx.sig) * c
        return out


def admissible_linear_weights(k: int, n: int) -> tuple:
    """(lam, mu) = ((n - 2k)/2n, (n + 2k)/2n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Rational(n - 2 * k, 2 * n), Rational(n + 2 * k, 2 * n)


def check_linear_invariance(k: int, ctx: LinearContext) -> dict:
    """Residual of R_xixi^k under every generator."""
    P = xi_power(k, ctx.sig)
    return {g: act_linear(g, ctx, P) for g in generators(ctx.sig)}


def _kernel(columns: list, ctx: LinearContext, gens) -> list:
    rows: dict = {}
    for j, P in enumerate(columns):
        for gi, gen in enumerate(gens):
            for mono, v in act_linear(gen, ctx, P).terms.items():
                rows.setdefault((gi, mono), {})[j] = v
    return linalg.nullspace(rows.values(), len(columns))


def classify_linear(ctx: LinearContext, k_max: int) -> list:
    """Basis of the invariant operators among sum_{k <= k_max} c_k R_xixi^k."""
    vecs = _kernel([xi_power(k, ctx.sig) for k in range(k_max + 1)], ctx, generators(ctx.sig))
    out = []
    for v in vecs:
        op = LinearOperatorSymbol(ctx, {k: c for k, c in enumerate(v) if c})
        lead = op.coefficients[max(op.coefficients)]
        out.append(LinearOperatorSymbol(ctx, {k: c / lead for k, c in op.coefficients.items()}))
    return out


def _xxi_monomials(n: int, x_degree: int, xi_degree: int) -> list:
    xs = monomials_up_to([Variable(X, i) for i in range(1, n + 1)], x_degree)
    xis = monomials_up_to([Variable(XI, i) for i in range(1, n + 1)], xi_degree)
    return [mono_mul(a, b) for a in xs for b in xis]


def classify_linear_full(ctx: LinearContext, k_max: int, x_degree: int = 4) -> list:
    """Kernel over every monomial x^a xi^b with |a| <= x_degree, |b| <= 2 k_max.

    Makes no use of the Euclidean reduction; returns kernel polynomials.
    """
    n = ctx.n
    monos = _xxi_monomials(n, x_degree, 2 * k_max)
    cols = [SymbolPoly(n, {m: 1}) for m in monos]
    return [
        SymbolPoly(n, {monos[j]: c for j, c in enumerate(v) if c})
        for v in _kernel(cols, ctx, generators(ctx.sig))
    ]


def euclidean_kernel(sig: Signature, degree: int) -> list:
    """Polynomials in (x, xi) of total degree <= ``degree`` killed by all translations and rotations."""
    n = sig.n
    monos = monomials_up_to(
        [Variable(X, i) for i in range(1, n + 1)] + [Variable(XI, i) for i in range(1, n + 1)], degree
    )
    ctx = LinearContext(sig, 0, 0)
    gens = [g for g in generators(sig) if g.kind in (TRANSLATION, ROTATION)]
    cols = [SymbolPoly(n, {m: 1}) for m in monos]
    return [
        SymbolPoly(n, {monos[j]: c for j, c in enumerate(v) if c}) for v in _kernel(cols, ctx, gens)
    ]


def in_span(polys: list, basis: list) -> bool:
    """Whether every polynomial in ``polys`` is a rational combination of ``basis``."""
    for p in polys:
        rows: dict = {}
        for j, b in enumerate(basis):
            for m, c in b.terms.items():
                rows.setdefault(m, {})[j] = c
        for m in p.terms:
            rows.setdefault(m, {})
        keys = list(rows)
        if linalg.solve([rows[k] for k in keys], [p.coefficient(k) for k in keys], len(basis)) is None:
            return False
    return True


def inversion_closed_form(k: int, ctx: LinearContext, i: int) -> SymbolPoly:
    """2(2k - n delta) x_i R^k + 2k(n(2 lam - 1) + 2k) xi_i R^{k-1}."""
    sig, n = ctx.sig, ctx.n
    out = SymbolPoly.x(n, i) * xi_power(k, sig) * (sig.g(i) * 2 * (2 * k - n * ctx.delta))
    if k:
        out = out + SymbolPoly.xi(n, i) * xi_power(k - 1, sig) * (2 * k * (n * (2 * ctx.lam - 1) + 2 * k))
    return out

