"""Exact sparse row reduction over the rationals."""
from __future__ import annotations

from typing import Iterable

from .poly import Rational


def _reduce(rows: Iterable[dict]) -> dict:
    """Reduce sparse rows (col -> Rational) to echelon form.

    Returns ``{pivot_col: row}`` with each row normalized so its pivot entry is 1
    and every pivot column cleared from all other stored rows.
    """
    pivots: dict = {}
    for row in rows:
        row = {c: Rational(v) for c, v in row.items() if v}
        # stored pivot rows are zero in every other pivot column, so one pass suffices
        for c in [c for c in row if c in pivots]:
            f = row.get(c)
            if not f:
                continue
            for cc, vv in pivots[c].items():
                s = row.get(cc, 0) - f * vv
                if s:
                    row[cc] = s
                else:
                    row.pop(cc, None)
        if not row:
            continue
        p = min(row)
        inv = 1 / row[p]
        row = {c: v * inv for c, v in row.items()}
        for other in pivots.values():
            f = other.get(p)
            if f:
                for cc, vv in row.items():
                    s = other.get(cc, 0) - f * vv
                    if s:
                        other[cc] = s
                    else:
                        other.pop(cc, None)
        pivots[p] = row
    return pivots


def nullspace(rows: Iterable[dict], ncols: int) -> list:
    """Basis of ``{v : row . v = 0 for all rows}`` as dense lists of rationals.

    Each basis vector has a 1 in one free column and 0 in the other free columns.
    """
    pivots = _reduce(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Rational(0)] * ncols
        v[fc] = Rational(1)
        for pc, row in pivots.items():
            coeff = row.get(fc)
            if coeff:
                v[pc] = -coeff
        basis.append(v)
    return basis


def rank(rows: Iterable[dict]) -> int:
    return len(_reduce(rows))


def solve(rows: list, rhs: list, ncols: int):
    """One solution of ``A v = b`` or ``None`` if inconsistent (free variables set to 0)."""
    aug = []
    for row, b in zip(rows, rhs):
        r = dict(row)
        if b:
            r[ncols] = Rational(b)
        aug.append(r)
    pivots = _reduce(aug)
    if ncols in pivots:
        return None
    v = [Rational(0)] * ncols
    for pc, row in pivots.items():
        v[pc] = row.get(ncols, Rational(0))
    return v
