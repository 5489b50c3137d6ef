"""Command line interface.

Examples
--------
  fqzeros bound --q 4 --d 2 --m 2 --r 1..3
  fqzeros construct --kind tb --q 5 --d 3 --m 2 --r 2 > fam.txt
  fqzeros count fam.txt
  fqzeros classify fam.txt
  fqzeros search --q 5 --d 3 --m 2 --r 4 --mode conjecture --samples 1e6 --seed 1
  fqzeros verify --q 4 --d 2 --m 2 --r 2
  fqzeros table --q 2,3,4 --d 1,2 --m 2 --r 1..3

Exit codes: 0 success or Match, 1 invalid input, 2 BelowBound, 3 ExceedsBound,
4 work budget exceeded, 5 a structural check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from math import comb
from typing import Any, Callable, Sequence

from . import search as S
from .bounds import (
    BoundParams,
    conjecture_bound,
    hp_bound_general,
    serre_bound,
    tb_bound_explicit,
    tb_bound_general,
    validity,
)
from .closefam import correlation_profile
from .constructions import fermat_family, line_family, tb_maximal_family
from .errors import BudgetExceeded, FqZerosError, StructureViolation
from .familyio import format_family, read_family
from .gf import field_make, prime_power
from .projgeom import count_proj_zeros

EXIT_OK, EXIT_INVALID, EXIT_BELOW, EXIT_EXCEEDS, EXIT_BUDGET, EXIT_STRUCTURE = 0, 1, 2, 3, 4, 5
VERDICT_EXIT = {S.MATCH: EXIT_OK, S.BELOW: EXIT_BELOW, S.EXCEEDS: EXIT_EXCEEDS}


class UsageError(FqZerosError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with BelowBound
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


# -- argument types ------------------------------------------------------------------

def int_list(text: str) -> list[int]:
    """'3', '1..4' or '2,3,5' (items may themselves be ranges)."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty list {text!r}")
    return out


def big_int(text: str) -> int:
    """Integers written as 1000000, 10^6 or 1e6."""
    t = text.strip().replace("_", "")
    if "^" in t:
        base, exp = t.split("^", 1)
        return int(base) ** int(exp)
    if "e" in t.lower():
        mant, exp = t.lower().split("e", 1)
        if "." not in mant:
            return int(mant) * 10 ** int(exp)
        return int(float(t))
    return int(t)


# -- output ----------------------------------------------------------------------------

def _cell(v: Any) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def render(rows: Sequence[dict], columns: Sequence[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{c: r.get(c) for c in columns} for r in rows], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({c: "" if r.get(c) is None else r.get(c) for c in columns})
        return buf.getvalue()
    table = [list(columns)] + [[_cell(r.get(c)) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(columns))]
    return "".join("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n" for row in table)


def _emit(args, text: str):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, default=str) + "\n"


def _try(fn: Callable, *a):
    try:
        return fn(*a)
    except FqZerosError:
        return None


# -- bound / table ---------------------------------------------------------------------

BOUND_COLUMNS = ("q", "d", "m", "r", "tb_general", "tb_explicit", "hp", "serre", "conjecture", "notes")


def _notes(p: BoundParams) -> str:
    flags = validity(p)
    notes = []
    if not flags["tbc_hypothesis"]:
        notes.append("TBC hypothesis d < q-1 not met")
    if p.r > p.m + 1:
        notes.append("r > m+1")
    if not flags["serre"]:
        notes.append("d > q+1")
    return "; ".join(notes)


def bound_row(p: BoundParams) -> dict:
    return {
        "q": p.q, "d": p.d, "m": p.m, "r": p.r,
        "tb_general": tb_bound_general(p),
        "tb_explicit": _try(tb_bound_explicit, p),
        "hp": _try(hp_bound_general, p),
        "serre": serre_bound(p.q, p.d, p.m),
        "conjecture": _try(conjecture_bound, p),
        "notes": _notes(p),
    }


def _grid(args) -> list[BoundParams]:
    out = []
    for q in args.q:
        prime_power(q)
        for d in args.d:
            for m in args.m:
                rs = args.r if args.r is not None else range(1, m + 2)
                for r in rs:
                    if r <= comb(m + d, d):
                        out.append(BoundParams(q, d, m, r))
    return out


def cmd_bound(args) -> int:
    rows = [bound_row(p) for p in _grid(args)]
    _emit(args, render(rows, BOUND_COLUMNS, args.format))
    return EXIT_OK


TABLE_COLUMNS = BOUND_COLUMNS[:-1] + ("verify_max", "verify_verdict", "notes")


def cmd_table(args) -> int:
    rows = []
    for p in _grid(args):
        row = bound_row(p)
        if args.no_verify:
            row.update(verify_max=None, verify_verdict="skipped")
        else:
            try:
                rep = S.exhaustive_max(p, budget=args.budget, witnesses=0)
                row.update(verify_max=rep.max_count, verify_verdict=rep.verdict)
            except BudgetExceeded:
                row.update(verify_max=None, verify_verdict="skipped(budget)")
            except FqZerosError:
                row.update(verify_max=None, verify_verdict="skipped(field)")
        rows.append(row)
    fmt = args.format or "csv"
    _emit(args, render(rows, TABLE_COLUMNS, fmt))
    return EXIT_OK


# -- construct / count / classify --------------------------------------------------------------

def cmd_construct(args) -> int:
    if args.kind == "tb":
        fam = tb_maximal_family(BoundParams(args.q, args.d, args.m, args.r), args.lambdas)
    elif args.kind == "lines":
        fam = line_family(args.q, args.d, args.r)
    else:
        fam = fermat_family(args.q, args.m, args.r)
    cert = fam.meta["certificate"]
    if args.format == "json":
        from .polyspace import format_poly

        _emit(args, _dump({"family": [format_poly(f) for f in fam], "certificate": cert}))
    else:
        text = format_family(fam) + "".join(f"# {line}\n" for line in json.dumps(cert).splitlines())
        _emit(args, text)
    return EXIT_OK if cert["match"] in (True, None) else EXIT_STRUCTURE


def _profile_summary(fam) -> dict | None:
    if fam.r < 2 or fam.d < 2 or fam.rank < fam.r:
        return None
    try:
        prof = correlation_profile(fam)
    except StructureViolation as exc:
        return {"error": str(exc)}
    return {"b": prof.b, "case": prof.case, "branch": prof.branch,
            "common_linear_factor": prof.common_linear_factor}


def cmd_count(args) -> int:
    fam = read_family(args.file)
    zc = count_proj_zeros(fam)
    q, m, d, r = fam.field.q, fam.m, fam.d, fam.r
    out = {"q": q, "m": m, "d": d, "r": r, "rank": fam.rank, "projective": zc.projective,
           "hyperplane": zc.hyperplane, "affine": zc.affine}
    tb = annotation = None
    if fam.rank == r and r <= comb(m + d, d):
        tb = tb_bound_general(BoundParams(q, d, m, r))
        annotation = S.verdict_for(zc.projective, tb)
    out.update(tb_bound=tb, annotation=annotation, profile=_profile_summary(fam))
    if args.format == "json":
        _emit(args, _dump(out))
    else:
        cols = [k for k in out if k != "profile"]
        text = render([out], cols, args.format)
        if args.format == "text" and out["profile"]:
            text += "profile: " + json.dumps(out["profile"]) + "\n"
        _emit(args, text)
    return EXIT_OK


def cmd_classify(args) -> int:
    fam = read_family(args.file)
    _emit(args, _dump(correlation_profile(fam).to_json()))
    return EXIT_OK


# -- search / verify -------------------------------------------------------------------------------

def _run_search(args) -> S.SearchReport:
    if args.mode == "affine":
        return S.exhaustive_affine_max(args.q, args.d, args.m, args.r, budget=args.budget,
                                       witnesses=args.witnesses)
    p = BoundParams(args.q, args.d, args.m, args.r)
    if args.mode == "exhaustive":
        return S.exhaustive_max(p, budget=args.budget, witnesses=args.witnesses)
    if args.mode == "random":
        return S.random_probe(p, args.samples, args.seed, witnesses=args.witnesses)
    return S.conjecture_probe(p, args.samples, args.seed, budget=args.budget)


def _report_text(rep: S.SearchReport) -> str:
    keys = ("mode", "spaces_examined", "max_count", "bound", "verdict", "maximizers",
            "maximizers_with_linear_factor", "seed", "backend")
    lines = [f"params: q={rep.params['q']} d={rep.params['d']} m={rep.params['m']} r={rep.params['r']}"]
    lines += [f"{k}: {_cell(getattr(rep, k))}" for k in keys]
    for k, v in rep.extra.items():
        if k != "witness_bases":
            lines.append(f"{k}: {_cell(v)}")
    for w in rep.witnesses:
        lines.append("witness: " + " ; ".join(w))
    return "\n".join(lines) + "\n"


def _write_report(args, rep: S.SearchReport):
    if args.format == "json":
        obj = rep.to_json()
        obj["extra"] = {k: v for k, v in obj["extra"].items() if k != "witness_bases"}
        _emit(args, _dump(obj))
    elif args.format == "csv":
        _emit(args, render([rep.csv_row()], S.SearchReport.CSV_COLUMNS, "csv"))
    else:
        _emit(args, _report_text(rep))
    if getattr(args, "csv", None):
        import os

        new = not os.path.exists(args.csv) or os.path.getsize(args.csv) == 0
        with open(args.csv, "a", encoding="utf-8", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=S.SearchReport.CSV_COLUMNS, lineterminator="\n")
            if new:
                w.writeheader()
            w.writerow({k: "" if v is None else v for k, v in rep.csv_row().items()})


def cmd_search(args) -> int:
    rep = _run_search(args)
    _write_report(args, rep)
    if args.mode in ("random", "conjecture"):
        return EXIT_EXCEEDS if rep.verdict == S.EXCEEDS else EXIT_OK
    return VERDICT_EXIT[rep.verdict]


def cmd_verify(args) -> int:
    p = BoundParams(args.q, args.d, args.m, args.r)
    rep = S.exhaustive_max(p, budget=args.budget, witnesses=args.witnesses)
    code = VERDICT_EXIT[rep.verdict]
    if rep.extra.get("theorem_hypotheses") and not S.structure_ok(rep):
        rep.extra["structure"] = "maximiser without a common linear factor"
        code = code or EXIT_STRUCTURE
    if p.r == 1 and p.d <= p.q + 1:
        audit = S.serre_sharpness_audit(p.q, p.d, p.m, budget=args.budget)
        rep.extra["serre_audit"] = {"ok": audit.ok, "maximizers": audit.maximizers,
                                    "failures": audit.failures[:10]}
        if not audit.ok:
            code = code or EXIT_STRUCTURE
    _write_report(args, rep)
    return code


# -- parser ----------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default=None)
    common.add_argument("-o", "--output", help="write to this file instead of stdout")

    ap = _Parser(prog="fqzeros", description="Common zeros of polynomial systems over finite fields.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def grid_args(p, r_default=None):
        p.add_argument("--q", type=int_list, required=True)
        p.add_argument("--d", type=int_list, required=True)
        p.add_argument("--m", type=int_list, default=[2])
        p.add_argument("--r", type=int_list, default=r_default, help="defaults to 1..m+1")

    def single_args(p, m_default=2):
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--m", type=int, default=m_default)
        p.add_argument("--r", type=int, default=1)

    p = sub.add_parser("bound", parents=[common], help="closed-form bounds")
    grid_args(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("table", parents=[common], help="bound and verification grid (CSV)")
    grid_args(p)
    p.add_argument("--budget", type=big_int, default=10 ** 7)
    p.add_argument("--no-verify", action="store_true")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("construct", parents=[common], help="build an extremal family")
    p.add_argument("--kind", choices=("tb", "lines", "fermat"), default="tb")
    single_args(p)
    p.add_argument("--lambdas", type=int_list, default=None, help="roots used by the tb family")
    p.set_defaults(func=cmd_construct)

    for name, fn, hlp in (("count", cmd_count, "count common zeros of a family file"),
                          ("classify", cmd_classify, "gcd correlation profile of a family file")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("file")
        p.set_defaults(func=fn)

    p = sub.add_parser("search", parents=[common], help="exhaustive or random search")
    single_args(p)
    p.add_argument("--mode", choices=("exhaustive", "random", "conjecture", "affine"), default="exhaustive")
    p.add_argument("--budget", type=big_int, default=S.DEFAULT_BUDGET)
    p.add_argument("--samples", type=big_int, default=10 ** 5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--witnesses", type=int, default=4)
    p.add_argument("--csv", help="append a CSV row to this file")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", parents=[common], help="exhaustive check against T_r(d, m)")
    single_args(p)
    p.add_argument("--budget", type=big_int, default=S.DEFAULT_BUDGET)
    p.add_argument("--witnesses", type=int, default=4)
    p.set_defaults(func=cmd_verify)
    return ap


_DEFAULT_FORMAT = {"table": "csv", "search": "json", "verify": "text", "classify": "json"}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = _DEFAULT_FORMAT.get(args.command, "text")
    if hasattr(args, "q") and isinstance(args.q, int):
        try:
            prime_power(args.q)
        except FqZerosError as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return EXIT_INVALID
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: BudgetExceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (FqZerosError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
