"""Command-line front end.

Exit codes: 0 ok / valid / satisfied / found, 1 invalid / violated / none
found, 2 usage, I/O or parse error (and inapplicable bounds), 3 search budget
exhausted, 4 sampling invariant violated.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import bounds as B
from .designs import (
    BibdParams,
    RLambdaParams,
    ValidationReport,
    validate_bibd,
    validate_oa,
    validate_pbd,
    validate_r_lambda,
)
from .fileio import FormatError, read_design, read_oa, write_design
from .moments import as_rational
from .oracle import (
    BudgetExhausted,
    SearchBudget,
    enumerate_bibds,
    enumerate_pbds_with_block,
    max_constant_weight_code,
)
from .sampling import InvariantViolation, TwoPointInstance, exact_failure, simulate

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET, EXIT_INVARIANT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


# --- formatting --------------------------------------------------------------


def approx(x: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 6
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return f"{d:.6g}"


def show(x: Optional[Fraction]) -> str:
    if x is None:
        return "-"
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x} (~{approx(x)})"


def rational_json(x: Optional[Fraction]):
    if x is None:
        return None
    return {"numerator": str(x.numerator), "denominator": str(x.denominator)}


def _yes(flag: Optional[bool]) -> str:
    return "n/a" if flag is None else ("yes" if flag else "no")


def bound_json(rep: B.BoundReport) -> dict:
    return {
        "bound": rep.name,
        "applicable": rep.applicable,
        "relation": rep.relation,
        "lhs": rational_json(rep.lhs),
        "rhs": rational_json(rep.rhs),
        "slack": rational_json(rep.slack),
        "satisfied": rep.satisfied,
        "equality": rep.equality,
        "notes": list(rep.notes),
    }


def bound_text(rep: B.BoundReport) -> str:
    lines = [
        f"bound: {rep.name}",
        f"relation: lhs {rep.relation} rhs",
        f"lhs: {show(rep.lhs)}",
        f"rhs: {show(rep.rhs)}",
        f"slack: {show(rep.slack)}",
        f"satisfied: {_yes(rep.satisfied)}",
        f"equality: {_yes(rep.equality)}",
    ]
    lines += [f"note: {n}" for n in rep.notes]
    return "\n".join(lines)


def validation_json(rep: ValidationReport) -> dict:
    return {
        "family": rep.family,
        "valid": rep.valid,
        "violations": [{"code": v.code, "message": v.message} for v in rep.violations],
    }


def validation_text(rep: ValidationReport) -> str:
    lines = [f"family: {rep.family}", f"valid: {_yes(rep.valid)}"]
    lines += [f"violation {v.code}: {v.message}" for v in rep.violations]
    return "\n".join(lines)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# --- argument helpers ----------------------------------------------------------


def int_list(text: str, count: Optional[int] = None) -> list[int]:
    text = text.strip()
    if not text:
        vals = []
    else:
        try:
            vals = [int(t) for t in text.split(",")]
        except ValueError:
            raise UsageError(f"expected comma-separated integers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise UsageError(f"expected {count} comma-separated integers, got {text!r}")
    return vals


def int_range(text: str) -> list[int]:
    """``"a..b"`` (inclusive), ``"a,b,c"`` or a single integer."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"bad range {text!r}") from None


# --- verify ----------------------------------------------------------------


def cmd_verify(args) -> int:
    path = Path(args.path)
    try:
        if args.oa:
            report = validate_oa(read_oa(path))
        else:
            inc = read_design(path)
            if args.pbd:
                report = validate_pbd(inc)
            elif args.bibd is not None:
                v, b, r, k, lam = int_list(args.bibd, 5)
                report = validate_bibd(inc, BibdParams(v, b, r, k, lam))
            else:
                r, lam = int_list(args.rlambda, 2)
                report = validate_r_lambda(inc, RLambdaParams(inc.num_points, inc.num_blocks, r, lam))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    except (FormatError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None
    print(_dump(validation_json(report)) if args.json else validation_text(report))
    return EXIT_OK if report.valid else EXIT_FAIL


# --- bound -----------------------------------------------------------------

# name -> (required int options, optional int options)
BOUND_ARGS = {
    "fisher": (["v", "b", "r", "k", "lambda"], []),
    "mann": (["v", "b", "r", "k", "lambda", "s"], []),
    "plackett-burman": (["k", "n", "lambda"], []),
    "oa-repeated": (["k", "n", "lambda", "m"], []),
    "johnson": (["m", "n", "r", "lambda"], []),
    "johnson-code": (["n", "r", "delta"], ["size"]),
    "johnson-improved": (["m", "n", "r", "lambda"], []),
    "stanton-kalbfleisch": (["v", "k"], ["b"]),
    "erdos-de-bruijn": (["v", "k"], ["b"]),
    "mullin-vanstone": (["v", "r", "lambda"], ["b"]),
    "nonincident": (["q", "s"], ["t"]),
    "west": (["q"], []),
    "stinson": (["v", "k"], ["ell", "b"]),
    "two-point": (["k"], []),
}


def _evaluate_bound(name: str, a: dict):
    lam = a.get("lambda")
    if name == "fisher":
        return B.fisher(BibdParams(a["v"], a["b"], a["r"], a["k"], lam))
    if name == "mann":
        return B.mann(BibdParams(a["v"], a["b"], a["r"], a["k"], lam), a["s"])
    if name == "plackett-burman":
        return B.plackett_burman(a["k"], a["n"], lam)
    if name == "oa-repeated":
        return B.oa_repeated_row(a["k"], a["n"], lam, a["m"])
    if name == "johnson":
        return B.johnson_matrix(a["m"], a["n"], a["r"], lam)
    if name == "johnson-code":
        return B.johnson_code(a["n"], a["r"], a["delta"], a.get("size"))
    if name == "johnson-improved":
        return B.johnson_improved_check(a["m"], a["n"], a["r"], lam)
    if name == "stanton-kalbfleisch":
        return B.stanton_kalbfleisch(a["v"], a["k"], a.get("b"))
    if name == "erdos-de-bruijn":
        return B.erdos_de_bruijn(a["v"], a["k"], a.get("b"))
    if name == "mullin-vanstone":
        return B.mullin_vanstone(a["v"], a["r"], lam, a.get("b"))
    if name == "nonincident":
        return B.nonincident_lines_bound(B.PlaneNonincidence(a["q"], a["s"], a.get("t")))
    if name == "stinson":
        ell = a.get("ell")
        if ell is None:
            ell = B.stinson_best_ell(a["v"], a["k"])
        return B.stinson_bound(a["v"], a["k"], ell, a.get("b"))
    raise UsageError(f"unknown bound {name!r}")


def cmd_bound(args) -> int:
    name = args.bound_name
    required, optional = BOUND_ARGS[name]
    a = {key: getattr(args, key.replace("-", "_")) for key in required + optional}
    try:
        if name == "west":
            return _print_west(B.west_diagonal_bound(a["q"]), args.json)
        if name == "two-point":
            return _print_two_point(a["k"], as_rational(args.eps), args.json)
        rep = _evaluate_bound(name, a)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{name}: {exc}") from None
    if not rep.applicable:
        print(f"designbounds: {rep.notes[0]}", file=sys.stderr)
        return EXIT_USAGE
    print(_dump(bound_json(rep)) if args.json else bound_text(rep))
    return EXIT_OK if rep.satisfied else EXIT_FAIL


def _print_west(wb: B.WestBound, as_json: bool) -> int:
    if as_json:
        print(_dump({
            "bound": "west",
            "q": wb.q,
            "square_bound": None if wb.square_bound is None else str(wb.square_bound),
            "integer_bound": str(wb.integer_bound),
            "value": rational_json(wb.value),
        }))
    else:
        sq = "-" if wb.square_bound is None else str(wb.square_bound)
        print(f"bound: west\nq: {wb.q}\nsquare bound: {sq}\ninteger bound: {wb.integer_bound}\n"
              f"value: {show(wb.value)}")
    return EXIT_OK


def _print_two_point(k: int, eps: Fraction, as_json: bool) -> int:
    val = B.two_point_error_bound(k, eps)
    if as_json:
        print(_dump({"bound": "two-point", "k": k, "eps": rational_json(eps),
                     "value": rational_json(val)}))
    else:
        print(f"bound: two-point\nk: {k}\neps: {show(eps)}\nerror probability at most: {show(val)}")
    return EXIT_OK


# --- table -----------------------------------------------------------------

TABLE_ARGS = {
    "johnson-code": ["n", "r", "delta"],
    "johnson-improved-max-m": ["n", "r", "lambda"],
    "stanton-kalbfleisch": ["v", "k"],
    "stinson": ["v", "k"],
}


def _table_rows(kind: str, ranges: dict[str, list[int]]):
    if kind == "johnson-code":
        cols = ["n", "r", "delta", "bound", "max_size"]
        for n in ranges["n"]:
            for r in ranges["r"]:
                for delta in ranges["delta"]:
                    if not (0 < delta < r <= n):
                        continue
                    rep = B.johnson_code(n, r, delta)
                    if rep.applicable:
                        yield cols, [n, r, delta, rep.rhs, int(rep.lhs)]
                    else:
                        yield cols, [n, r, delta, None, None]
    elif kind == "johnson-improved-max-m":
        cols = ["n", "r", "lambda", "max_m"]
        for n in ranges["n"]:
            for r in ranges["r"]:
                for lam in ranges["lambda"]:
                    if not (0 <= lam < r <= n):
                        continue
                    yield cols, [n, r, lam, B.johnson_improved_max_m(n, r, lam)]
    elif kind == "stanton-kalbfleisch":
        cols = ["v", "k", "bound", "min_b"]
        for v in ranges["v"]:
            for k in ranges["k"]:
                if not 2 <= k < v:
                    continue
                rep = B.stanton_kalbfleisch(v, k)
                yield cols, [v, k, rep.rhs, int(rep.lhs)]
    else:
        cols = ["v", "k", "ell", "bound", "min_b", "sk_bound"]
        for v in ranges["v"]:
            for k in ranges["k"]:
                if not 2 <= k < v:
                    continue
                ell = B.stinson_best_ell(v, k)
                rep = B.stinson_bound(v, k, ell)
                yield cols, [v, k, ell, rep.rhs, int(rep.lhs), B.stanton_kalbfleisch_rhs(v, k)]


def _cell(x) -> str:
    if x is None:
        return "-"
    return str(x)


def cmd_table(args) -> int:
    kind = args.kind
    ranges = {}
    for key in TABLE_ARGS[kind]:
        text = getattr(args, key)
        if text is None:
            raise UsageError(f"table {kind} needs --{key}")
        vals = int_range(text)
        if not vals:
            raise UsageError(f"empty range for --{key}: {text!r}")
        ranges[key] = vals
    try:
        produced = list(_table_rows(kind, ranges))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not produced:
        raise UsageError("no parameter combination in range is in the domain")
    cols = produced[0][0]
    rows = [r for _, r in produced]
    if args.format == "json":
        out = []
        for row in rows:
            out.append({c: (rational_json(x) if isinstance(x, Fraction) else x)
                        for c, x in zip(cols, row)})
        print(_dump({"table": kind, "columns": cols, "rows": out}))
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in rows:
            w.writerow([_cell(x) for x in row])
        sys.stdout.write(buf.getvalue())
    else:
        cells = [cols] + [[_cell(x) for x in row] for row in rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(cols))]
        for r in cells:
            print("  ".join(c.rjust(w) for c, w in zip(r, widths)))
    return EXIT_OK


# --- search ----------------------------------------------------------------


def cmd_search(args) -> int:
    fam = args.family
    try:
        budget = SearchBudget(max_nodes=args.budget, max_solutions=args.max_solutions)
        if fam == "cw-code":
            for key in ("n", "r", "d"):
                if getattr(args, key) is None:
                    raise UsageError(f"search cw-code needs --{key}")
            best = max_constant_weight_code(args.n, args.r, args.d, budget)
            print(f"family: cw-code\nn: {args.n}\nr: {args.r}\nd: {args.d}\nmax size: {best}")
            return EXIT_OK if best > 0 else EXIT_FAIL
        if fam == "bibd":
            for key in ("v", "k", "lam"):
                if getattr(args, key) is None:
                    raise UsageError(f"search bibd needs --{key.replace('lam', 'lambda')}")
            found = enumerate_bibds(args.v, args.k, args.lam, budget)
            label = f"bibd v={args.v} k={args.k} lambda={args.lam}"
        else:
            for key in ("v", "k", "max_b"):
                if getattr(args, key) is None:
                    raise UsageError(f"search pbd-with-block needs --{key.replace('_', '-')}")
            found = enumerate_pbds_with_block(args.v, args.k, args.max_b, budget)
            label = f"pbd-with-block v={args.v} k={args.k} max_b={args.max_b}"
    except BudgetExhausted as exc:
        print(f"search: {fam}")
        print(f"status: budget exhausted after {exc.nodes} nodes")
        print(f"found so far: {len(exc.partial)}")
        return EXIT_BUDGET
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"search: {label}")
    print(f"found: {len(found)}")
    if args.out is not None and found:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        stem = fam.replace("-", "_")
        for i, inc in enumerate(found):
            write_design(out / f"{stem}_{i:04d}.design", inc)
        print(f"written to: {out}")
    return EXIT_OK if found else EXIT_FAIL


# --- sample ----------------------------------------------------------------


def sampling_json(rep) -> dict:
    return {
        "p": rep.p,
        "k": rep.k,
        "bad_points": list(rep.bad_points),
        "total_rows": rep.total_rows,
        "good_rows": rep.good_rows,
        "good_row_bound": rational_json(rep.good_row_bound),
        "exact_failure": rational_json(rep.exact_failure),
        "bound": rational_json(rep.bound),
        "row_good_counts": {str(k): v for k, v in rep.row_good_counts.items()},
        "empirical_failure": rational_json(rep.empirical_failure),
        "trials": rep.trials,
        "seed": rep.seed,
    }


def sampling_text(rep) -> str:
    lines = [
        f"p: {rep.p}",
        f"k: {rep.k}",
        f"bad points: {','.join(map(str, rep.bad_points)) or '-'}",
        f"rows: {rep.total_rows}",
        f"good rows: {rep.good_rows} (at least {show(rep.good_row_bound)})",
        f"exact failure: {show(rep.exact_failure)}",
        f"bound: {show(rep.bound)}",
        "row good counts: " + " ".join(f"{k}:{v}" for k, v in rep.row_good_counts.items()),
    ]
    if rep.empirical_failure is not None:
        lines.append(f"empirical failure: {show(rep.empirical_failure)} "
                     f"over {rep.trials} trials, seed {rep.seed}")
    return "\n".join(lines)


def cmd_sample(args) -> int:
    oa = None
    try:
        if args.oa is not None:
            oa = read_oa(args.oa)
            if not validate_oa(oa).valid:
                raise UsageError(f"{args.oa}: not an orthogonal array")
            if oa.lam != 1:
                raise UsageError(f"{args.oa}: sampling needs an index-1 array")
            if (args.p not in (None, oa.n)) or (args.k not in (None, oa.k)):
                raise UsageError("--p/--k disagree with the OA file")
            p, k = oa.n, oa.k
        else:
            if args.p is None or args.k is None:
                raise UsageError("sample needs --p and --k, or --oa")
            p, k = args.p, args.k
        inst = TwoPointInstance(p, k, int_list(args.bad))
        if args.trials is None:
            rep = exact_failure(inst, oa)
        else:
            rep = simulate(inst, args.trials, args.seed, oa)
    except OSError as exc:
        raise UsageError(f"cannot read {args.oa}: {exc.strerror or exc}") from None
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (FormatError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    print(_dump(sampling_json(rep)) if args.json else sampling_text(rep))
    return EXIT_OK


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="designbounds",
        description="Exact variance-method bounds for designs and codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a design or OA file against its axioms")
    p.add_argument("path")
    fam = p.add_mutually_exclusive_group(required=True)
    fam.add_argument("--bibd", metavar="V,B,R,K,LAMBDA")
    fam.add_argument("--pbd", action="store_true")
    fam.add_argument("--oa", action="store_true")
    fam.add_argument("--rlambda", metavar="R,LAMBDA")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bound", help="evaluate one named bound")
    bsub = p.add_subparsers(dest="bound_name", required=True, metavar="BOUND")
    for name, (required, optional) in BOUND_ARGS.items():
        bp = bsub.add_parser(name)
        for key in required:
            bp.add_argument(f"--{key}", dest=key.replace("-", "_"), type=int, required=True)
        for key in optional:
            bp.add_argument(f"--{key}", dest=key.replace("-", "_"), type=int)
        if name == "two-point":
            bp.add_argument("--eps", required=True, help="exact rational, e.g. 1/4")
        bp.add_argument("--json", action="store_true")
        bp.set_defaults(func=cmd_bound)

    p = sub.add_parser("table", help="sweep a bound over parameter ranges")
    p.add_argument("kind", choices=sorted(TABLE_ARGS))
    for key in ("n", "r", "delta", "lambda", "v", "k"):
        p.add_argument(f"--{key}", dest=key, metavar="RANGE")
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("search", help="exhaustive search for small objects")
    p.add_argument("family", choices=["bibd", "pbd-with-block", "cw-code"])
    p.add_argument("--v", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--lambda", dest="lam", type=int)
    p.add_argument("--max-b", dest="max_b", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--budget", type=int, default=10_000_000, help="node limit")
    p.add_argument("--max-solutions", dest="max_solutions", type=int, default=10**12)
    p.add_argument("--out", help="directory for found designs")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("sample", help="two-point sampling failure analysis")
    p.add_argument("--p", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--bad", default="", help="comma-separated bad points")
    p.add_argument("--oa", help="OA file to sample from instead of the built-in array")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"designbounds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
