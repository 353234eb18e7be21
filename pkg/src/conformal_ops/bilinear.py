"""Invariant bilinear operators B_2k = sum c_rst R_xixi^r R_xieta^s R_etaeta^t.

Three independent routes to the coefficients live here: the two-equation
recurrence (normalized by c_{0,k,0} = 1), the explicit k = 1, 2 formulas
and edge products, and a plain nullspace computation over the full ansatz
that never divides by a weight-dependent quantity.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from typing import Mapping, NamedTuple

from . import linalg
from .action import BilinearContext, act_bilinear, invariant_power
from .conformal import Signature, generators
from .errors import ContractViolation, InconsistentSystem, ResonantWeight
from .poly import Rational, SymbolPoly, as_rational, parse_rational


class InvariantMonomial(NamedTuple):
    r: int
    s: int
    t: int

    @property
    def order(self) -> int:
        return 2 * (self.r + self.s + self.t)


def level_monomials(k: int) -> list:
    """All (r, s, t) with r + s + t = k, ordered by r then t."""
    return [InvariantMonomial(r, k - r - t, t) for r in range(k + 1) for t in range(k - r + 1)]


@dataclass(frozen=True)
class CoeffTable:
    k: int
    entries: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, c in dict(self.entries).items():
            key = InvariantMonomial(*key)
            if min(key) < 0 or sum(key) != self.k:
                raise ContractViolation(f"monomial {tuple(key)} does not have r+s+t={self.k}")
            c = as_rational(c)
            if c:
                clean[key] = c
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    def __getitem__(self, key) -> Rational:
        return self.entries.get(InvariantMonomial(*key), Rational(0))

    def __hash__(self):
        return hash((self.k, tuple(self.entries.items())))

    def symbol(self, sig: Signature) -> SymbolPoly:
        out = SymbolPoly.zero(sig.n)
        for (r, s, t), c in self.entries.items():
            out = out + invariant_power(r, s, t, sig) * c
        return out

    def scaled(self, c) -> "CoeffTable":
        c = as_rational(c)
        return CoeffTable(self.k, {key: v * c for key, v in self.entries.items()})

    def normalized(self) -> "CoeffTable":
        """Scale so that c_{0,k,0} = 1 (or, if it vanishes, the first nonzero entry)."""
        if not self.entries:
            return self
        lead = self[(0, self.k, 0)] or next(iter(self.entries.values()))
        return self.scaled(1 / lead)

    def proportional_to(self, other: "CoeffTable"):
        """The scalar c with ``other = c * self``, or None if the tables are not proportional."""
        if self.k != other.k or set(self.entries) != set(other.entries):
            return None
        if not self.entries:
            return Rational(1)
        key = next(iter(self.entries))
        c = other.entries[key] / self.entries[key]
        return c if all(other.entries[kk] == c * v for kk, v in self.entries.items()) else None


@dataclass(frozen=True)
class BilinearOperator:
    """A coefficient table with its weights.

    ``nu`` is kept as given so that deliberately non-homogeneous operators can
    be checked; :attr:`homogeneous` reports whether nu = lam + mu + 2k/n.
    """

    ctx: BilinearContext
    table: CoeffTable

    @classmethod
    def build(cls, table: CoeffTable, sig: Signature, lam, mu) -> "BilinearOperator":
        nu = target_weight(lam, mu, table.k, sig.n)
        return cls(BilinearContext(sig, lam, mu, nu), table)

    @property
    def homogeneous(self) -> bool:
        return self.ctx.nu == target_weight(self.ctx.lam, self.ctx.mu, self.table.k, self.ctx.n)

    def symbol(self) -> SymbolPoly:
        return self.table.symbol(self.ctx.sig)


def target_weight(lam, mu, k: int, n: int) -> Rational:
    if n < 1:
        raise ContractViolation("n must be >= 1")
    return as_rational(lam) + as_rational(mu) + Rational(2 * k, n)


def _dim(n_or_sig) -> int:
    return n_or_sig.n if isinstance(n_or_sig, Signature) else int(n_or_sig)


def recurrence_denominators(k: int, n: int, lam, mu) -> list:
    """Factors that the recurrence divides by: ``(label, which, step, value)``.

    ``2(r+1) + n(2 lam - 1)`` for r = 0..k-1 and ``2(t+1) + n(2 mu - 1)`` for t = 0..k-1.
    """
    lam, mu = as_rational(lam), as_rational(mu)
    out = []
    for step in range(k):
        j = 2 * (step + 1)
        out.append((f"{j}+n(2λ−1)", "lambda", step, j + n * (2 * lam - 1)))
        out.append((f"{j}+n(2μ−1)", "mu", step, j + n * (2 * mu - 1)))
    return out


def check_resonance(k: int, n: int, lam, mu) -> None:
    for label, which, step, value in recurrence_denominators(k, n, lam, mu):
        if value == 0:
            raise ResonantWeight(label, which, step, lam if which == "lambda" else mu)


def is_resonant(k: int, n: int, lam, mu) -> bool:
    return any(v == 0 for *_, v in recurrence_denominators(k, n, lam, mu))


def _system1(c, r, s, t, n, lam, mu):
    """Residual of the first recurrence at (r, s, t), r+s+t = k-1."""
    return (
        2 * (r + 1) * (2 * (r + 1) + n * (2 * lam - 1)) * c(r + 1, s, t)
        - (s + 2) * (s + 1) * c(r, s + 2, t - 1)
        + 2 * (s + 1) * (s + 2 * t + n * mu) * c(r, s + 1, t)
    )


def _system2(c, r, s, t, n, lam, mu):
    return (
        2 * (t + 1) * (2 * (t + 1) + n * (2 * mu - 1)) * c(r, s, t + 1)
        - (s + 2) * (s + 1) * c(r - 1, s + 2, t)
        + 2 * (s + 1) * (s + 2 * r + n * lam) * c(r, s + 1, t)
    )


def solve_recurrence(k: int, lam, mu, n) -> CoeffTable:
    """Coefficients c_rst of B_2k with c_{0,k,0} = 1.

    Level r = 0 is filled from the second equation (walking t upward), every
    higher level from the first.  Afterwards every instance of both equations
    is re-checked, so each entry reachable two ways is confirmed both ways.
    """
    n = _dim(n)
    lam, mu = as_rational(lam), as_rational(mu)
    if k < 0:
        raise ContractViolation("k must be >= 0")
    check_resonance(k, n, lam, mu)
    table: dict = {(0, k, 0): Rational(1)}

    def c(r, s, t):
        if min(r, s, t) < 0:
            return 0
        return table[(r, s, t)]

    for t in range(k):
        s = k - 1 - t
        rest = -(s + 2) * (s + 1) * c(-1, s + 2, t) + 2 * (s + 1) * (s + n * lam) * c(0, s + 1, t)
        table[(0, s, t + 1)] = -rest / (2 * (t + 1) * (2 * (t + 1) + n * (2 * mu - 1)))
    for r in range(k):
        for t in range(k - r):
            s = k - 1 - r - t
            rest = -(s + 2) * (s + 1) * c(r, s + 2, t - 1) + 2 * (s + 1) * (s + 2 * t + n * mu) * c(r, s + 1, t)
            table[(r + 1, s, t)] = -rest / (2 * (r + 1) * (2 * (r + 1) + n * (2 * lam - 1)))

    for r, s, t in level_monomials(k - 1):
        for system in (_system1, _system2):
            if system(c, r, s, t, n, lam, mu) != 0:
                raise InconsistentSystem(f"{system.__name__[1:]} fails at (r,s,t)=({r},{s},{t})")
    return CoeffTable(k, table)


def closed_form(k: int, lam, mu, n) -> CoeffTable:
    """Closed-form coefficients of B_2 (k=1) and B_4 (k=2)."""
    n = _dim(n)
    lam, mu = as_rational(lam), as_rational(mu)
    a = 2 + n * (2 * lam - 1)
    b = 2 + n * (2 * mu - 1)
    if k == 1:
        return CoeffTable(1, {
            (1, 0, 0): n * mu * b,
            (0, 1, 0): -b * a,
            (0, 0, 1): n * lam * a,
        })
    if k == 2:
        a4 = 4 + n * (2 * lam - 1)
        b4 = 4 + n * (2 * mu - 1)
        return CoeffTable(2, {
            (0, 2, 0): -a * b * a4 * b4,
            (1, 1, 0): 2 * (1 + n * mu) * b * a4 * b4,
            (0, 1, 1): 2 * (1 + n * lam) * a * a4 * b4,
            (1, 0, 1): -Rational(1, 2)
            * (a + 2 * (1 + n * mu) * (2 + n * lam) + b + 2 * (1 + n * lam) * (2 + n * mu))
            * a4 * b4,
            (2, 0, 0): -(1 + n * mu) * b * n * mu * b4,
            (0, 0, 2): -(1 + n * lam) * a * n * lam * a4,
        })
    raise ContractViolation("explicit formulas exist only for k = 1, 2")


XI_EDGE = "xi"
ETA_EDGE = "eta"


def edge_coefficients(k: int, i: int, side: str, lam, mu, n) -> Rational:
    """c_{i,k-i,0} (``side="xi"``) or c_{0,k-i,i} (``side="eta"``) with c_{0,k,0} = 1."""
    n = _dim(n)
    lam, mu = as_rational(lam), as_rational(mu)
    if not 0 <= i <= k:
        raise ContractViolation(f"need 0 <= i <= k, got i={i}, k={k}")
    if side == XI_EDGE:
        own, other, which = lam, mu, "lambda"
        sym = "λ"
    elif side == ETA_EDGE:
        own, other, which = mu, lam, "mu"
        sym = "μ"
    else:
        raise ContractViolation(f"side must be 'xi' or 'eta', got {side!r}")
    num, den = Rational(1), Rational(1)
    for j in range(1, i + 1):
        d = 2 * j + n * (2 * own - 1)
        if d == 0:
            raise ResonantWeight(f"{2 * j}+n(2{sym}−1)", which, j - 1, own)
        num *= k - j + n * other
        den *= d
    return (-1) ** i * comb(k, i) * num / den


def verify_invariance(B: BilinearOperator, gens=None) -> dict:
    """Residual symbol for every generator; the operator is invariant iff all are zero."""
    P = B.symbol()
    gens = gens if gens is not None else generators(B.ctx.sig)
    return {g: act_bilinear(g, B.ctx, P) for g in gens}


def all_zero(report: dict) -> bool:
    return all(not v for v in report.values())


def classify_bilinear(lam, mu, nu, k_max: int, sig: Signature) -> list:
    """Basis of invariant operators sum_{r+s+t <= k_max} c_rst R^{r,s,t}.

    Pure nullspace computation; resonant weights are allowed.  Each basis
    element is returned as a :class:`CoeffTable` (the dilation separates levels,
    so every kernel vector lives on a single k).
    """
    ctx = BilinearContext(sig, lam, mu, nu)
    cols = [m for k in range(k_max + 1) for m in level_monomials(k)]
    rows: dict = {}
    for j, (r, s, t) in enumerate(cols):
        P = invariant_power(r, s, t, sig)
        for gi, gen in enumerate(generators(sig)):
            for mono, v in act_bilinear(gen, ctx, P).terms.items():
                rows.setdefault((gi, mono), {})[j] = v
    basis = []
    for vec in linalg.nullspace(rows.values(), len(cols)):
        levels = {sum(cols[j]) for j, v in enumerate(vec) if v}
        if len(levels) != 1:
            raise ArithmeticError("kernel vector mixes homogeneity levels")
        (k,) = levels
        basis.append(CoeffTable(k, {cols[j]: v for j, v in enumerate(vec) if v}).normalized())
    return basis


def compare_tables(reference: CoeffTable, candidate: CoeffTable) -> dict:
    """Coefficient-by-coefficient comparison up to one overall scalar.

    The scalar is fixed on c_{0,k,0} (or the first nonzero reference entry);
    ``mismatches`` lists ``(key, expected, got)`` after rescaling ``candidate``.
    """
    ref = reference.normalized()
    k = ref.k
    pivot = (0, k, 0) if candidate[(0, k, 0)] else next(iter(candidate.entries), None)
    scale = ref[pivot] / candidate[pivot] if pivot is not None and candidate[pivot] else None
    mismatches = []
    keys = level_monomials(k)
    for key in keys:
        got = candidate[key] * scale if scale is not None else candidate[key]
        if got != ref[key]:
            mismatches.append((key, ref[key], got))
    return {"scale": scale, "mismatches": mismatches, "agree": scale is not None and not mismatches}


# serialization


def operator_to_dict(B: BilinearOperator) -> dict:
    ctx = B.ctx
    return {
        "n": ctx.n,
        "signature": [ctx.sig.p, ctx.sig.q],
        "lambda": str(ctx.lam),
        "mu": str(ctx.mu),
        "nu": str(ctx.nu),
        "k": B.table.k,
        "coefficients": [
            {"r": r, "s": s, "t": t, "c": str(c)} for (r, s, t), c in B.table.entries.items()
        ],
    }


def operator_from_dict(data: dict) -> BilinearOperator:
    try:
        p, q = data["signature"]
        sig = Signature(int(p), int(q))
        if int(data["n"]) != sig.n:
            raise ContractViolation(f"n={data['n']} disagrees with signature ({p},{q})")
        k = int(data["k"])
        entries = {
            (int(e["r"]), int(e["s"]), int(e["t"])): parse_rational(str(e["c"]))
            for e in data["coefficients"]
        }
        ctx = BilinearContext(
            sig,
            parse_rational(str(data["lambda"])),
            parse_rational(str(data["mu"])),
            parse_rational(str(data["nu"])),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed operator record: {exc}") from exc
    return BilinearOperator(ctx, CoeffTable(k, entries))


def operator_to_json(B: BilinearOperator) -> str:
    return json.dumps(operator_to_dict(B), indent=2)


def operator_from_json(text: str) -> BilinearOperator:
    return operator_from_dict(json.loads(text))


def _latex_rational(c: Rational) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    sign = "-" if c < 0 else ""
    return f"{sign}\\frac{{{abs(c.numerator)}}}{{{c.denominator}}}"


def table_to_latex(table: CoeffTable) -> str:
    if not table.entries:
        return "0"
    parts = []
    for (r, s, t), c in table.entries.items():
        factors = []
        for name, e in (("\\xi\\xi", r), ("\\xi\\eta", s), ("\\eta\\eta", t)):
            if e == 1:
                factors.append(f"R_{{{name}}}")
            elif e > 1:
                factors.append(f"R_{{{name}}}^{{{e}}}")
        body = " ".join(factors)
        if not body:
            coef = _latex_rational(c)
        elif c == 1:
            coef = ""
        elif c == -1:
            coef = "-"
        else:
            coef = _latex_rational(c) + " "
        parts.append(coef + body)
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def table_to_text(table: CoeffTable) -> str:
    """One aligned row per monomial: coefficient, then R_xixi^r R_xieta^s R_etaeta^t."""
    if not table.entries:
        return "0"
    width = max(len(str(c)) for c in table.entries.values())
    rows = []
    for (r, s, t), c in table.entries.items():
        rows.append(f"{str(c):>{width}}  Rxixi^{r} Rxieta^{s} Retaeta^{t}")
    return "\n".join(rows)
