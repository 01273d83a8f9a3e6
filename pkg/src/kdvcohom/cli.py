"""Command line reports for the pencil cohomology engine.

Four subcommands: verify runs the operator-identity suites, pages reports
windowed spectral page dimensions, bh prints cohomology tables with their
canonical generators, and acceptance runs the full criterion battery.
Exit status is 0 when everything requested passed, 1 when a check failed,
and 2 for usage errors.  JSON output is stable: keys are sorted, entries
are listed in canonical order and timing is omitted.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence, Tuple

from .acceptance import (
    ALL_CHECKS,
    VERIFY_SUITES,
    format_results,
    run_acceptance,
    run_verify_suite,
    windowed_page_count,
)
from .algebra import Bidegree, format_poly
from .cohomeng import KINDS, dims_table, p_bound, piece_count_range, piece_homology
from .linwin import DEFAULT_LADDER, Window

_SCHEMA = 1
_MAX_TOTAL = 6


def _parse_window(text: str) -> Window:
    try:
        n, l = text.split(":")
        w = Window(int(n), int(l))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"window must look like N:L, got {text!r}")
    if w.N < 0 or w.L < 0:
        raise argparse.ArgumentTypeError("window caps must be nonnegative")
    return w


def _parse_windows(text: str) -> Tuple[Window, ...]:
    return tuple(_parse_window(part) for part in text.split(","))


def _parse_bidegree(text: str) -> Bidegree:
    try:
        p, d = text.split(",")
        bd = Bidegree(int(p), int(d))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"bidegree must look like p,d, got {text!r}")
    return bd


def _windowed_reps(kind: str, p: int, d: int, w: Window) -> List[str]:
    """Formatted canonical generators of one table entry, smallest count first."""
    out = []
    for c in piece_count_range(kind, d, w):
        ph = piece_homology(kind, p, d, c)
        for vec, m in ph.reps:
            if m is not None:
                if m.in_window(w.N, w.L):
                    out.append(m.format() or "1")
            else:
                monos = [ph.basis.monomials[i] for i, x in enumerate(vec) if x]
                if all(mm.in_window(w.N, w.L) for mm in monos):
                    out.append(format_poly(ph.basis.poly_of(list(vec))) or "1")
    return out


def build_parser() -> argparse.ArgumentParser:
    # the output flags are declared twice, once on the top level parser with
    # real defaults and once on every subparser with SUPPRESS defaults, so
    # they are accepted on either side of the subcommand name
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"),
                        default=argparse.SUPPRESS)
    common.add_argument("--out", metavar="PATH", default=argparse.SUPPRESS,
                        help="write the report to a file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="kdvcohom",
        description="exact cohomology reports for the Poisson pencil of "
                    "the dispersionless KdV equation")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--out", metavar="PATH",
                        help="write the report to a file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run operator identity suites",
                              parents=[common])
    p_verify.add_argument("--suite", action="append", choices=VERIFY_SUITES,
                          help="restrict to one suite (repeatable)")
    p_verify.add_argument("--max-d", type=int, default=6,
                          help="degree bound of the monomial battery")
    p_verify.add_argument("--window", type=_parse_window, default=Window(3, 2),
                          help="battery window as N:L")

    p_pages = sub.add_parser("pages", help="windowed spectral page dimensions",
                            parents=[common])
    p_pages.add_argument("--page", type=int, default=1,
                         help="page index r >= 1")
    p_pages.add_argument("--max-total", type=int, default=4,
                         help=f"largest p+q reported (at most {_MAX_TOTAL})")
    p_pages.add_argument("--windows", type=_parse_windows,
                         default=tuple(DEFAULT_LADDER),
                         help="comma separated list of N:L windows")

    p_bh = sub.add_parser("bh", help="cohomology tables with generators",
                         parents=[common])
    p_bh.add_argument("--kind", action="append", choices=KINDS,
                      help="table kind (repeatable, default both joint-kernel tables)")
    p_bh.add_argument("--window", type=_parse_window, default=Window(3, 2))
    p_bh.add_argument("--max-d", type=int, default=5)
    p_bh.add_argument("--bidegree", action="append", type=_parse_bidegree,
                      help="restrict to one p,d spot (repeatable)")

    p_acc = sub.add_parser("acceptance", help="run the acceptance battery",
                          parents=[common])
    p_acc.add_argument("--check", action="append",
                       help="restrict to one named criterion (repeatable)")
    return parser


def _cmd_verify(args) -> Tuple[dict, bool, str]:
    names = tuple(args.suite) if args.suite else VERIFY_SUITES
    results = [run_verify_suite(nm, max_d=args.max_d, window=args.window)
               for nm in names]
    ok = all(r.passed for r in results)
    lines = [f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}"
             for r in results]
    lines.append("OK" if ok else "FAILED")
    payload = {
        "schema": _SCHEMA,
        "command": "verify",
        "window": [args.window.N, args.window.L],
        "max_d": args.max_d,
        "results": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                    for r in results],
        "ok": ok,
    }
    return payload, ok, "\n".join(lines)


def _cmd_pages(args, parser) -> Tuple[dict, bool, str]:
    if args.page < 1:
        parser.error("--page must be at least 1")
    if not 0 <= args.max_total <= _MAX_TOTAL:
        parser.error(f"--max-total must lie in 0..{_MAX_TOTAL}")
    headers = [f"{w.N}:{w.L}" for w in args.windows]
    entries = []
    lines = [f"page {args.page} window counts by (p, q); windows "
             + " ".join(headers)]
    for n in range(args.max_total + 1):
        for p in range(n + 1):
            q = n - p
            counts = {f"{w.N}:{w.L}": windowed_page_count(args.page, p, q, w)
                      for w in args.windows}
            entries.append({"p": p, "q": q, "counts": counts})
            if any(counts.values()):
                row = " ".join(str(counts[h]).rjust(len(h)) for h in headers)
                lines.append(f"  ({p},{q}): {row}")
    if len(lines) == 1:
        lines.append("  all positions vanish in the requested range")
    payload = {
        "schema": _SCHEMA,
        "command": "pages",
        "page": args.page,
        "windows": [[w.N, w.L] for w in args.windows],
        "entries": entries,
    }
    return payload, True, "\n".join(lines)


def _cmd_bh(args) -> Tuple[dict, bool, str]:
    kinds = tuple(args.kind) if args.kind else ("bh_A", "bh_F")
    w = args.window
    wanted = set(map(tuple, args.bidegree)) if args.bidegree else None
    tables = {}
    lines = []
    for kind in kinds:
        table = dims_table(kind, w, args.max_d)
        if wanted is not None:
            table = {bd: dim for bd, dim in table.items() if tuple(bd) in wanted}
        tables[kind] = table
        lines.append(f"{kind} window ({w.N},{w.L}) degrees <= {args.max_d}")
        shown = 0
        for bd in sorted(table):
            dim = table[bd]
            if dim == 0:
                continue
            gens = _windowed_reps(kind, bd.p, bd.d, w)
            lines.append(f"  ({bd.p},{bd.d}) dim {dim}: " + ", ".join(gens))
            shown += 1
        if shown == 0:
            lines.append("  every requested spot vanishes")
        zero = sum(1 for dim in table.values() if dim == 0)
        lines.append(f"  {zero} further spots vanish" if shown else "")
    payload = {
        "schema": _SCHEMA,
        "command": "bh",
        "window": [w.N, w.L],
        "max_d": args.max_d,
        "tables": {kind: {f"{bd.p},{bd.d}": dim for bd, dim in table.items()}
                   for kind, table in tables.items()},
    }
    return payload, True, "\n".join(line for line in lines if line)


def _cmd_acceptance(args, parser) -> Tuple[dict, bool, str]:
    known = {name for name, _ in ALL_CHECKS}
    names = None
    if args.check:
        unknown = [nm for nm in args.check if nm not in known]
        if unknown:
            parser.error(f"unknown acceptance checks: {', '.join(unknown)}")
        names = tuple(args.check)
    results = run_acceptance(names)
    ok = all(r.passed for r in results)
    payload = {
        "schema": _SCHEMA,
        "command": "acceptance",
        "results": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                    for r in results],
        "ok": ok,
    }
    return payload, ok, format_results(results)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        payload, ok, text = _cmd_verify(args)
    elif args.command == "pages":
        payload, ok, text = _cmd_pages(args, parser)
    elif args.command == "bh":
        payload, ok, text = _cmd_bh(args)
    else:
        payload, ok, text = _cmd_acceptance(args, parser)
    if args.format == "json":
        body = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        body = text + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
