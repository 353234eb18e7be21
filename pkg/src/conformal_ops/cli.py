"""Command-line entry point.

Exit codes: 0 ok, 2 parse/usage, 3 resonant weight, 4 not invariant,
5 empty classification, 6 file I/O.
"""
from __future__ import annotations

import argparse
import json
import re
import sys

from .action import LinearContext
from .bilinear import (
    BilinearOperator,
    all_zero,
    classify_bilinear,
    operator_from_json,
    operator_to_json,
    solve_recurrence,
    table_to_latex,
    table_to_text,
    verify_invariance,
)
from .conformal import Signature
from .errors import ContractViolation, InconsistentSystem, ResonantWeight
from .linear import classify_linear
from .oracle import DensityPoly, apply_bilinear, apply_linear, oracle_report
from .poly import X, Rational, parse_poly, parse_rational
from .transvectant import Poly1D, apply_transvectant, transvectant_coefficients

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_RESONANT = 3
EXIT_NOT_INVARIANT = 4
EXIT_EMPTY = 5
EXIT_IO = 6


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _rational(text: str) -> Rational:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _signature(text: str) -> Signature:
    try:
        return Signature.parse(text)
    except (ValueError, ContractViolation) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _context_sig(args) -> Signature:
    sig, n = args.signature, args.n
    if sig is None:
        if n is None:
            raise CliError(EXIT_PARSE, "one of --n or --signature is required")
        if n < 1:
            raise CliError(EXIT_PARSE, "--n must be >= 1")
        return Signature.euclidean(n)
    if n is not None and n != sig.n:
        raise CliError(EXIT_PARSE, f"--n {n} disagrees with --signature {sig}")
    return sig


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror}") from None


def _write(text: str, path: str | None):
    if not text.endswith("\n"):
        text += "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc.strerror}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _load_operator(path: str | None) -> BilinearOperator:
    text = _read(path)
    try:
        return operator_from_json(text)
    except (ValueError, ContractViolation) as exc:
        raise CliError(EXIT_PARSE, f"bad operator file: {exc}") from None


# subcommands ---------------------------------------------------------------

def cmd_construct_bilinear(args) -> int:
    sig = _context_sig(args)
    table = solve_recurrence(args.k, args.lam, args.mu, sig)
    B = BilinearOperator.build(table, sig, args.lam, args.mu)
    if args.format == "json":
        out = operator_to_json(B)
    elif args.format == "latex":
        out = table_to_latex(table)
    else:
        out = table_to_text(table)
    _write(out, args.output)
    return EXIT_OK


def _delta_latex(coeffs: dict) -> str:
    parts = []
    for k in sorted(coeffs, reverse=True):
        c = coeffs[k]
        body = "" if k == 0 else ("\\Delta" if k == 1 else f"\\Delta^{{{k}}}")
        if not body:
            coef = str(c)
        elif c == 1:
            coef = ""
        elif c == -1:
            coef = "-"
        else:
            coef = f"{c} "
        parts.append(coef + body)
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def cmd_classify_linear(args) -> int:
    sig = _context_sig(args)
    ctx = LinearContext(sig, args.lam, args.mu)
    basis = classify_linear(ctx, args.max_order // 2)
    if args.format == "json":
        out = _dump({
            "n": sig.n,
            "signature": [sig.p, sig.q],
            "lambda": str(ctx.lam),
            "mu": str(ctx.mu),
            "dimension": len(basis),
            "basis": [
                {
                    "order": op.order,
                    "coefficients": {str(k): str(c) for k, c in op.coefficients.items()},
                    "symbol": str(op.symbol()),
                }
                for op in basis
            ],
        })
    elif args.format == "latex":
        out = "\n".join(_delta_latex(op.coefficients) for op in basis) or "0"
    else:
        lines = [f"dimension {len(basis)}"]
        lines += [f"order {op.order}: {op.symbol()}" for op in basis]
        out = "\n".join(lines)
    _write(out, args.output)
    return EXIT_OK if basis else EXIT_EMPTY


def _table_record(table) -> dict:
    return {
        "k": table.k,
        "coefficients": [
            {"r": r, "s": s, "t": t, "c": str(c)} for (r, s, t), c in table.entries.items()
        ],
    }


def cmd_classify_bilinear(args) -> int:
    sig = _context_sig(args)
    basis = classify_bilinear(args.lam, args.mu, args.nu, args.max_k, sig)
    if args.format == "json":
        out = _dump({
            "n": sig.n,
            "signature": [sig.p, sig.q],
            "lambda": str(args.lam),
            "mu": str(args.mu),
            "nu": str(args.nu),
            "dimension": len(basis),
            "basis": [_table_record(t) for t in basis],
        })
    elif args.format == "latex":
        out = "\n".join(table_to_latex(t) for t in basis) or "0"
    else:
        blocks = [f"dimension {len(basis)}"]
        blocks += [f"k={t.k}\n{table_to_text(t)}" for t in basis]
        out = "\n".join(blocks)
    _write(out, args.output)
    return EXIT_OK if basis else EXIT_EMPTY


def cmd_verify(args) -> int:
    B = _load_operator(args.input)
    symbolic = verify_invariance(B)
    report = {
        "status": "ok",
        "symbolic": {str(g): str(res) for g, res in symbolic.items()},
    }
    bad = not all_zero(symbolic)
    if args.oracle:
        records = []
        for gen, items in oracle_report(B, args.degree).items():
            records += [
                {"generator": str(gen), "f": str(f), "g": str(g), "residual": str(res)}
                for f, g, res in items
            ]
        report["oracle"] = records
        bad = bad or bool(records)
    if bad:
        report["status"] = "not-invariant"
    if args.format == "json":
        out = _dump(report)
    else:
        lines = [f"status {report['status']}"]
        lines += [f"{g}: {r}" for g, r in report["symbolic"].items()]
        if args.oracle:
            lines.append(f"oracle residuals: {len(report['oracle'])}")
            lines += [
                f"{r['generator']} f={r['f']} g={r['g']}: {r['residual']}" for r in report["oracle"]
            ]
        out = "\n".join(lines)
    _write(out, args.output)
    return EXIT_NOT_INVARIANT if bad else EXIT_OK


def _x_poly(text: str, n: int):
    try:
        p = parse_poly(text, n)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    if p.families() - {X}:
        raise CliError(EXIT_PARSE, f"density must involve x variables only: {text!r}")
    return p


def cmd_apply(args) -> int:
    if args.input is not None:
        if args.g is None:
            raise CliError(EXIT_PARSE, "--g is required when applying a bilinear operator")
        B = _load_operator(args.input)
        n = B.ctx.n
        res = apply_bilinear(
            B,
            DensityPoly(_x_poly(args.f, n), B.ctx.lam),
            DensityPoly(_x_poly(args.g, n), B.ctx.mu),
        )
    else:
        if args.k is None or args.lam is None:
            raise CliError(EXIT_PARSE, "give --input FILE, or --k and --lambda for a Laplacian power")
        sig = _context_sig(args)
        res = apply_linear(args.k, sig, DensityPoly(_x_poly(args.f, sig.n), args.lam))
    if args.format == "json":
        out = _dump({"result": str(res.coeff), "weight": str(res.weight)})
    else:
        out = f"{res.coeff}\nweight {res.weight}"
    _write(out, args.output)
    return EXIT_OK


def cmd_transvectant(args) -> int:
    coeffs = transvectant_coefficients(args.k, args.lam, args.mu)
    result = None
    if args.f is not None or args.g is not None:
        if args.f is None or args.g is None:
            raise CliError(EXIT_PARSE, "--f and --g must be given together")
        try:
            f, g = Poly1D.parse(args.f), Poly1D.parse(args.g)
        except ValueError as exc:
            raise CliError(EXIT_PARSE, str(exc)) from None
        result = apply_transvectant(args.k, args.lam, args.mu, f, g)
    if args.format == "json":
        obj = {"k": args.k, "lambda": str(args.lam), "mu": str(args.mu), "coefficients": [str(c) for c in coeffs]}
        if result is not None:
            obj["result"] = str(result)
        out = _dump(obj)
    elif args.format == "latex":
        terms = []
        for i, c in enumerate(coeffs):
            if c:
                terms.append(f"{c} f^{{({i})}} g^{{({args.k - i})}}")
        out = " + ".join(terms).replace("+ -", "- ") or "0"
    else:
        out = "\n".join(f"{str(c)}  f^({i}) g^({args.k - i})" for i, c in enumerate(coeffs))
        if result is not None:
            out += f"\nresult {result}"
    _write(out, args.output)
    return EXIT_OK


def cmd_scan(args) -> int:
    sig = _context_sig(args)
    n = sig.n
    rows = []
    for j in range(2 * args.max_k + 1):
        nu = args.lam + args.mu + Rational(j, n)
        basis = classify_bilinear(args.lam, args.mu, nu, args.max_k, sig)
        rows.append({"j": j, "nu": str(nu), "dimension": len(basis), "orders": [2 * t.k for t in basis]})
    if args.format == "json":
        out = _dump({
            "n": n,
            "signature": [sig.p, sig.q],
            "lambda": str(args.lam),
            "mu": str(args.mu),
            "rows": rows,
        })
    elif args.format == "latex":
        lines = ["\\begin{tabular}{rrr}", "$j$ & $\\nu$ & $\\dim$ \\\\"]
        lines += [f"{r['j']} & ${r['nu']}$ & {r['dimension']} \\\\" for r in rows]
        lines.append("\\end{tabular}")
        out = "\n".join(lines)
    else:
        w = max(len(r["nu"]) for r in rows)
        lines = [f"{'j':>3}  {'nu':>{w}}  dim"]
        lines += [f"{r['j']:>3}  {r['nu']:>{w}}  {r['dimension']:>3}" for r in rows]
        out = "\n".join(lines)
    _write(out, args.output)
    return EXIT_OK


# parser --------------------------------------------------------------------

def _add_context(p, weights=("lambda", "mu")):
    p.add_argument("--n", type=int, help="dimension (defaults to p+q of --signature)")
    p.add_argument("--signature", type=_signature, help="metric signature 'p,q' (default: n,0)")
    for w in weights:
        dest = "lam" if w == "lambda" else w
        p.add_argument(f"--{w}", dest=dest, type=_rational, required=True, help=f"weight {w} as p/q")


def _add_output(p, formats=("json", "latex", "text")):
    p.add_argument("--format", choices=formats, default="text")
    p.add_argument("--output", "-o", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="conformal-ops",
        description="Exact conformally invariant linear and bilinear operators on densities.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct-bilinear", help="solve the recurrence for B_2k")
    _add_context(p)
    p.add_argument("--k", type=int, required=True)
    _add_output(p)
    p.set_defaults(func=cmd_construct_bilinear)

    p = sub.add_parser("classify-linear", help="invariant polynomials in the Laplacian")
    _add_context(p)
    p.add_argument("--max-order", type=int, default=8, help="largest differential order")
    _add_output(p)
    p.set_defaults(func=cmd_classify_linear)

    p = sub.add_parser("classify-bilinear", help="nullspace of invariant bilinear symbols")
    _add_context(p, ("lambda", "mu", "nu"))
    p.add_argument("--max-k", type=int, default=2)
    _add_output(p)
    p.set_defaults(func=cmd_classify_bilinear)

    p = sub.add_parser("verify", help="check an operator file for invariance")
    p.add_argument("input", nargs="?", help="operator JSON (default stdin)")
    p.add_argument("--oracle", action="store_true", help="also apply the operator to densities")
    p.add_argument("--degree", type=int, help="oracle monomial degree bound (default 2k+2)")
    _add_output(p, ("json", "text"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("apply", help="apply an operator to polynomial densities")
    p.add_argument("--input", help="bilinear operator JSON")
    p.add_argument("--f", required=True)
    p.add_argument("--g")
    p.add_argument("--k", type=int, help="Laplacian power when no --input is given")
    p.add_argument("--n", type=int)
    p.add_argument("--signature", type=_signature)
    p.add_argument("--lambda", dest="lam", type=_rational, help="weight of f for the Laplacian power")
    _add_output(p, ("json", "text"))
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("transvectant", help="one-dimensional transvectant coefficients")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=_rational, required=True)
    p.add_argument("--mu", type=_rational, required=True)
    p.add_argument("--f")
    p.add_argument("--g")
    _add_output(p)
    p.set_defaults(func=cmd_transvectant)

    p = sub.add_parser("scan", help="kernel dimension along nu = lambda + mu + j/n")
    _add_context(p)
    p.add_argument("--max-k", type=int, default=2)
    _add_output(p)
    p.set_defaults(func=cmd_scan)
    return ap


_WEIGHT_FLAGS = ("--lambda", "--mu", "--nu")
_NEGATIVE = re.compile(r"-\d+(/\d+)?")


def _glue_negative_weights(argv: list) -> list:
    """Let ``--mu -1/6`` through; argparse would read ``-1/6`` as an option."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _WEIGHT_FLAGS and i + 1 < len(argv) and _NEGATIVE.fullmatch(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_negative_weights(argv))
    if getattr(args, "k", None) is not None and args.k < 0:
        print("error: --k must be >= 0", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ResonantWeight as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESONANT
    except InconsistentSystem as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_INVARIANT
    except ContractViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
