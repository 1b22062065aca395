"""Command-line front end.

Exit codes: 0 pass, 1 mathematical failure (with witness), 2 usage or
configuration error.  JSON output is deterministic for a given configuration;
worker count and time budget are not echoed, and timings appear only with
--timing.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Dict, List, Optional

from . import harness
from .combinat import (
    MAX_DIGRAPH_N,
    MAX_FOREST_N,
    BudgetError,
    digraph_counts,
    oracle_bivariate_psi,
    oracle_triangle,
)
from .exactalg import R, coeff_of, format_poly
from .tpcheck import BudgetExceeded, TPReport
from .triangle import NAMED_TRIANGLES, MatrixError, PolyMatrix, production_matrix

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# ---------------------------------------------------------------------------
# Emission


def _cell(p):
    return p.to_int() if p.is_constant() and p.to_rational().denominator == 1 else format_poly(p)


def _table_payload(M: PolyMatrix, ragged: bool) -> List[List]:
    rows = M.triangle_rows() if ragged else M.rows
    return [[_cell(c) for c in row] for row in rows]


def _table_text(rows: List[List]) -> str:
    return "\n".join("  ".join(str(c) for c in row) for row in rows)


def _table_csv(rows: List[List]) -> str:
    return "\n".join(",".join(str(c) for c in row) for row in rows)


def _report_text(rep: TPReport, label: str) -> str:
    lines = [f"{label}: {rep.verdict} ({rep.scope()}, {rep.minors_evaluated} minors)"]
    if rep.witness is not None:
        w = rep.witness
        lines.append(f"  witness rows={list(w.rows)} cols={list(w.cols)}")
        lines.append(f"  det = {format_poly(w.det)}")
        lines.append(f"  offending monomial {w.monomial} with coefficient {w.coeff}")
    return "\n".join(lines)


def _emit(args, doc: Dict, text: str, csv_rows: Optional[List[List]] = None) -> None:
    if args.format == "json":
        out = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    elif args.format == "csv":
        if csv_rows is None:
            raise UsageError("csv output is only available for integer tables")
        if any(not isinstance(c, int) for row in csv_rows for c in row):
            raise UsageError("csv output needs a fully numeric table; specialize with --set")
        out = _table_csv(csv_rows) + "\n"
    else:
        out = text + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _config(args, **extra) -> Dict:
    cfg = {"command": args.command}
    cfg.update(extra)
    cfg["set"] = {k: format_poly(v) for k, v in sorted(args.bindings.items())}
    cfg["format"] = args.format
    return cfg


def _doc(args, config: Dict, result, reports: List, t0: float) -> Dict:
    return {
        "command": args.command,
        "config": config,
        "result": result,
        "reports": reports,
        "wall_time_ms": round((time.monotonic() - t0) * 1000.0, 3) if args.timing else None,
    }


# ---------------------------------------------------------------------------
# Commands


def cmd_table(args, t0) -> int:
    if args.name not in NAMED_TRIANGLES:
        raise UsageError(f"unknown triangle {args.name!r}")
    n = 8 if args.n is None else args.n
    if n < 0:
        raise UsageError("--n must be nonnegative")
    M = harness.matrix(args.name, n + 1, args.bindings)
    rows = _table_payload(M, ragged=True)
    cfg = _config(args, name=args.name, n=n)
    doc = _doc(args, cfg, "ok", [{"type": "table", "name": args.name, "rows": rows}], t0)
    _emit(args, doc, _table_text(rows), rows)
    return EXIT_PASS


def cmd_prodmat(args, t0) -> int:
    if args.name not in NAMED_TRIANGLES and args.name != "identity-triangle":
        raise UsageError(f"unknown triangle {args.name!r}")
    N = 8 if args.n is None else args.n
    if N < 2:
        raise UsageError("production matrix window must be at least 2")
    if args.name == "identity-triangle":
        from .triangle import identity

        P = production_matrix(identity(N + 1))
    else:
        P = harness.matrix("prod:" + args.name, N, args.bindings)
    rows = _table_payload(P, ragged=False)
    cfg = _config(args, name=args.name, n=N)
    doc = _doc(args, cfg, "ok", [{"type": "production_matrix", "name": args.name, "rows": rows}], t0)
    _emit(args, doc, _table_text(rows), rows)
    return EXIT_PASS


def _run_report(args, t0, cfg, label, runner) -> int:
    try:
        rep = runner()
    except BudgetExceeded:
        doc = _doc(args, cfg, "budget_exceeded", [], t0)
        _emit(args, doc, f"{label}: time budget exhausted before the scan finished")
        return EXIT_USAGE
    body = rep.to_json(timing=args.timing)
    body["scope"] = rep.scope()
    doc = _doc(args, cfg, rep.verdict, [body], t0)
    _emit(args, doc, _report_text(rep, label))
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_check(args, t0) -> int:
    if (args.matrix is None) == (args.seq is None):
        raise UsageError("give exactly one of --matrix or --seq")
    if args.kind == "tp" and args.matrix is None:
        raise UsageError("check tp needs --matrix")
    if args.kind in ("hankel", "toeplitz") and args.seq is None:
        raise UsageError(f"check {args.kind} needs --seq")
    target = args.matrix or args.seq
    N = 8 if args.n is None else args.n
    r = 3 if args.r is None else args.r
    if r < 1 or N < 1:
        raise UsageError("--r and --window must be positive")
    cfg = _config(args, kind=args.kind, target=target, window=N, r=r)
    runner = lambda: harness.run_check(args.kind, target, N, r, args.jobs, args.budget_ms, args.bindings)
    return _run_report(args, t0, cfg, f"check {args.kind} {target}", runner)


def _run_claim_cmd(args, t0, registry, what) -> int:
    if args.id not in registry:
        raise UsageError(f"unknown {what} id {args.id!r}; known: {', '.join(registry)}")
    claim = registry[args.id]
    N = claim.window if args.n is None else args.n
    r = claim.r if args.r is None else args.r
    cfg = _config(args, id=claim.id, statement=claim.statement, kind=claim.kind, target=claim.target,
                  bindings={k: format_poly(v) for k, v in claim.binding_map().items()}, window=N, r=r)
    runner = lambda: harness.run_claim(claim, N, r, args.jobs, args.budget_ms, args.bindings)
    return _run_report(args, t0, cfg, f"{what} {claim.id}", runner)


def cmd_conjecture(args, t0) -> int:
    return _run_claim_cmd(args, t0, harness.CONJECTURES, "conjecture")


def cmd_theorem(args, t0) -> int:
    return _run_claim_cmd(args, t0, harness.THEOREMS, "theorem")


def cmd_identity(args, t0) -> int:
    names = list(harness.IDENTITIES) if args.name == "all" else [args.name]
    for name in names:
        if name not in harness.IDENTITIES:
            raise UsageError(f"unknown identity {name!r}")
    reports = []
    for name in names:
        ok, detail = harness.IDENTITIES[name]()
        reports.append({"type": "identity", "name": name, "holds": ok, "detail": detail})
    ok = all(r["holds"] for r in reports)
    cfg = _config(args, name=args.name)
    doc = _doc(args, cfg, "pass" if ok else "fail", reports, t0)
    text = "\n".join(f"{r['name']}: {'holds' if r['holds'] else 'FAILS'} ({r['detail']})" for r in reports)
    _emit(args, doc, text)
    return EXIT_PASS if ok else EXIT_FAIL


# oracle-diff: triangle name -> function(n_max, via) returning oracle rows 0..n_max


def _oracle_forest_weighting(weighting):
    return lambda n, jobs: oracle_triangle(n + 1, weighting, jobs=jobs)


def _oracle_digraph(by):
    def build(n, jobs):
        N = n + 1
        rows = []
        for m in range(N):
            row = digraph_counts(m, by)
            rows.append([R.const(c) for c in row] + [R.zero()] * (N - len(row)))
        return rows

    return build


def _oracle_bivariate(var):
    def build(n, jobs):
        N = n + 1
        rows = []
        for m in range(N):
            P = oracle_bivariate_psi(m) if m else R.one()
            rows.append([coeff_of(P, var, k) for k in range(N)])
        return rows

    return build


_ORACLES = {
    "forest": (_oracle_forest_weighting("count"), MAX_FOREST_N),
    "ramanujan_yz": (_oracle_forest_weighting("yz"), MAX_FOREST_N),
    "rooted_forest_yphi": (_oracle_forest_weighting("yphi"), MAX_FOREST_N),
    "lah_phi": (_oracle_forest_weighting("lah"), MAX_FOREST_N),
    "root_descent_sharp": (_oracle_forest_weighting("root_descent"), MAX_FOREST_N),
    "ordered_forest": (_oracle_digraph("cyclic"), MAX_DIGRAPH_N),
    "functional_digraph_psi": (_oracle_digraph("components"), MAX_DIGRAPH_N),
    "psi_X": (_oracle_bivariate("x"), MAX_DIGRAPH_N),
    "psi_Y": (_oracle_bivariate("y"), MAX_DIGRAPH_N),
}


def oracle_diff(name: str, n_max: int, via: Optional[str] = None, jobs: int = 1) -> Dict:
    """Entrywise comparison of rows 0..n_max of a triangle against enumeration."""
    if name == "sgs_ab":
        weighting = {"propv": "sgs_propv", "ascdes": "sgs_ascdes", None: "sgs_propv"}.get(via)
        if weighting is None:
            raise UsageError("--via must be propv or ascdes")
        build, limit = _oracle_forest_weighting(weighting), MAX_FOREST_N
    elif name in _ORACLES:
        if via is not None:
            raise UsageError("--via only applies to sgs_ab")
        build, limit = _ORACLES[name]
    else:
        raise UsageError(f"no enumeration oracle for {name!r}")
    if n_max < 0 or n_max > limit:
        raise BudgetError(f"oracle for {name} limited to n <= {limit}")
    N = n_max + 1
    tri = harness.triangle(name, N)
    orc = build(n_max, jobs)
    mismatches = []
    for n in range(N):
        for k in range(n + 1):
            if tri[n, k] != orc[n][k]:
                mismatches.append({"n": n, "k": k, "triangle": format_poly(tri[n, k]), "oracle": format_poly(orc[n][k])})
    return {"type": "diff", "name": name, "n_max": n_max, "via": via, "identical": not mismatches, "mismatches": mismatches}


def cmd_oracle_diff(args, t0) -> int:
    n = 5 if args.n is None else args.n
    try:
        diff = oracle_diff(args.name, n, args.via, args.jobs)
    except BudgetError as exc:
        raise UsageError(str(exc)) from None
    cfg = _config(args, name=args.name, n=n, via=args.via)
    result = "identical" if diff["identical"] else "differ"
    doc = _doc(args, cfg, result, [diff], t0)
    text = f"oracle-diff {args.name} n<={n}: {result}"
    for m in diff["mismatches"][:10]:
        text += f"\n  ({m['n']},{m['k']}): triangle {m['triangle']} vs oracle {m['oracle']}"
    _emit(args, doc, text)
    return EXIT_PASS if diff["identical"] else EXIT_FAIL


def cmd_list(args, t0) -> int:
    listing = {
        "triangles": list(NAMED_TRIANGLES),
        "matrices": harness.matrix_names() + ["prod:<matrix>", "rowgen:<matrix>"],
        "sequences": {k: v[0] for k, v in harness.SEQUENCES.items()},
        "theorems": {k: c.statement for k, c in harness.THEOREMS.items()},
        "conjectures": {k: c.statement for k, c in harness.CONJECTURES.items()},
        "identities": list(harness.IDENTITIES),
    }
    doc = _doc(args, _config(args), "ok", [listing], t0)
    lines = []
    for key, val in listing.items():
        lines.append(f"{key}:")
        items = val.items() if isinstance(val, dict) else ((v, "") for v in val)
        for k, desc in items:
            lines.append(f"  {k}" + (f"  {desc}" if desc else ""))
    _emit(args, doc, "\n".join(lines))
    return EXIT_PASS


# ---------------------------------------------------------------------------
# Parser


def _common(p: argparse.ArgumentParser, window: bool = True, r: bool = False, jobs: bool = False) -> None:
    if window:
        p.add_argument("--n", "--window", "--N", dest="n", type=int, default=None,
                       help="row bound (table, oracle-diff) or window size (other commands)")
    if r:
        p.add_argument("--r", type=int, default=None, help="largest minor size to test (default 3)")
    if jobs:
        p.add_argument("--jobs", type=int, default=1, help="worker processes")
        p.add_argument("--budget-ms", dest="budget_ms", type=float, default=None, help="time budget for the scan")
    p.add_argument("--set", dest="sets", action="append", default=[], metavar="VAR=POLY",
                   help="substitute a polynomial for a variable (repeatable)")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", default=None, help="write output to this file")
    p.add_argument("--timing", action="store_true", help="include wall-clock times in the report")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tpforest", description="Forest-polynomial triangles and total-positivity checks.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("table", help="emit rows 0..n of a named triangle")
    p.add_argument("name")
    _common(p)

    p = sub.add_parser("prodmat", help="emit the production matrix window of a named triangle")
    p.add_argument("name")
    _common(p)

    p = sub.add_parser("check", help="coefficientwise TP, Hankel-TP or Toeplitz-TP check")
    p.add_argument("kind", choices=("tp", "hankel", "toeplitz"))
    p.add_argument("--matrix", default=None)
    p.add_argument("--seq", default=None)
    _common(p, r=True, jobs=True)

    p = sub.add_parser("oracle-diff", help="compare a triangle with brute-force enumeration")
    p.add_argument("name")
    p.add_argument("--via", choices=("propv", "ascdes"), default=None)
    _common(p, jobs=True)

    for cmd, helptext in (("conjecture", "run a conjecture check (evidence only)"),
                          ("theorem", "run a theorem check at a finite window")):
        p = sub.add_parser(cmd, help=helptext)
        p.add_argument("id")
        _common(p, r=True, jobs=True)

    p = sub.add_parser("identity", help="verify a matrix or series identity on a window")
    p.add_argument("name", help="identity name or 'all'")
    _common(p, window=False)

    p = sub.add_parser("list", help="list known names")
    _common(p, window=False)
    return parser


_COMMANDS = {
    "table": cmd_table,
    "prodmat": cmd_prodmat,
    "check": cmd_check,
    "oracle-diff": cmd_oracle_diff,
    "conjecture": cmd_conjecture,
    "theorem": cmd_theorem,
    "identity": cmd_identity,
    "list": cmd_list,
}


def main(argv: Optional[List[str]] = None) -> int:
    t0 = time.monotonic()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.bindings = harness.parse_bindings(args.sets)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        return _COMMANDS[args.command](args, t0)
    except UsageError as exc:
        print(f"tpforest: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, MatrixError) as exc:
        print(f"tpforest: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
