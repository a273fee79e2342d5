"""Command-line front end.

Every subcommand writes JSON-lines records to stdout and a short human
summary to stderr. Exit codes: 0 for success or a true verdict, 1 for a false
verdict, 2 for usage errors, 3 when an enumeration cap is hit.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys
from typing import Optional, Sequence

from .dsl import SpecError, build_ring, looks_like_family, parse_family
from .families import ConsistencyError, FieldConstructionError, WrongParent, build_family, classify_delta2, odd_p_classifier
from .lattice import count_antichains, enumerate_ideals, export_dot
from .path_algebra import PathAlgebra, QuiverError, pa_is_delta_p, parse_quiver
from .report import Report, stopwatch
from .ring import CapExceeded, PresentationError, default_cap, injected_fault
from .units import is_delta_p, is_prime, unit_group_report

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(rec: Report) -> None:
    sys.stdout.write(rec.to_json() + "\n")


def _say(text: str) -> None:
    sys.stderr.write(text + "\n")


def _ring(text: str, cap: int):
    if looks_like_family(text):
        return build_family(parse_family(text), cap)
    return build_ring(text, cap)


def _prime(text: str) -> int:
    p = int(text)
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


# subcommands ---------------------------------------------------------------------

def cmd_units(args) -> int:
    ring = _ring(args.ring, args.cap)
    rec = Report(ring.name, "units")
    with stopwatch(rec, args.timing):
        rep = unit_group_report(ring, args.primes or (2,), args.cap)
    rec.counts = {"order": rep.order, "exponent": rep.exponent, "abelian": rep.abelian,
                  "ea_rank": list(rep.ea_rank) if rep.ea_rank else None,
                  "delta_p": {str(p): v for p, v in sorted(rep.delta_p.items())}}
    rec.verdict = all(rep.delta_p.values())
    rec.witnesses = [str(rep.witness)] if rep.witness is not None else []
    _emit(rec)
    _say(f"{ring.name}: {rep.order} units, exponent {rep.exponent}")
    return EXIT_OK


def cmd_delta(args) -> int:
    ring = _ring(args.ring, args.cap)
    rec = Report(ring.name, f"delta_{args.p}")
    with stopwatch(rec, args.timing):
        ok, w = is_delta_p(ring, args.p, args.cap)
    rec.verdict = ok
    rec.counts = {"size": ring.size}
    rec.witnesses = [] if w is None else [str(w)]
    _emit(rec)
    _say(f"{ring.name}: Delta_{args.p} {'holds' if ok else 'fails'}" + ("" if ok else f", witness {w}"))
    return EXIT_OK if ok else EXIT_FALSE


def cmd_lattice(args) -> int:
    ring = _ring(args.ring, args.cap)
    rec = Report(ring.name, "lattice")
    with stopwatch(rec, args.timing):
        report = enumerate_ideals(ring, min(args.cap, 1 << 16))
    rec.counts = {"ideals": report.count, "covers": len(report.covers)}
    if args.dot:
        with open(args.dot, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(export_dot(report))
    _emit(rec)
    _say(f"{ring.name}: {report.count} ideals, {len(report.covers)} covers")
    return EXIT_OK


def cmd_dedekind(args) -> int:
    rec = Report(f"l={args.l}", "dedekind")
    with stopwatch(rec, args.timing):
        try:
            n = count_antichains(args.l)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    rec.counts = {"antichains": n}
    _emit(rec)
    _say(str(n))
    return EXIT_OK


def cmd_family(args) -> int:
    desc = parse_family(args.descriptor)
    rec = Report(str(desc), f"classify_delta{args.p}")
    with stopwatch(rec, args.timing):
        c = classify_delta2(desc, args.cap) if args.p == 2 else odd_p_classifier(desc, args.p, args.cap)
    rec.verdict = c.brute if c.brute is not None else c.predicted
    rec.counts = {"predicted": c.predicted, "brute": c.brute, "agree": c.agree,
                  "characteristic": c.characteristic, "table_row": c.table_row, "notes": c.notes}
    rec.witnesses = [c.witness] if c.witness else []
    _emit(rec)
    status = "unverified" if c.brute is None else ("verified" if c.agree else "DISAGREES with brute force")
    _say(f"{desc}: Delta_{args.p} predicted {c.predicted}, {status}")
    return EXIT_OK if rec.verdict and c.agree else EXIT_FALSE


def cmd_quiver(args) -> int:
    if os.path.exists(args.quiver):
        with open(args.quiver, encoding="utf-8") as fh:
            text = fh.read()
    elif ";" in args.quiver:
        text = args.quiver
    else:
        raise UsageError(f"no such quiver file: {args.quiver}")
    alg = PathAlgebra(parse_quiver(text), args.field)
    rec = Report(alg.name, f"delta_{args.p}")
    with stopwatch(rec, args.timing):
        res = pa_is_delta_p(alg, args.p, args.cap)
    rec.verdict = res.brute if res.brute is not None else res.structural
    rec.counts = {"paths": alg.dim, "units": alg.unit_count, "structural": res.structural, "brute": res.brute,
                  "abelian": res.abelian, "ea_rank": res.ea_rank}
    rec.witnesses = [res.witness] if res.witness else []
    _emit(rec)
    if res.flagged:
        _say(res.flagged)
    _say(f"{alg.name}: Delta_{args.p} structural {res.structural}, brute {res.brute}")
    return EXIT_OK if rec.verdict and res.agree else EXIT_FALSE


def cmd_verify(args) -> int:
    from .verify import verify_paper

    ctx = injected_fault("mul") if args.inject_fault else contextlib.nullcontext()
    with ctx:
        results = verify_paper(fast=args.fast, seed=args.seed, cap=args.cap)
    width = max(len(r.name) for r in results)
    for r in results:
        rec = Report(r.name, "verify", r.ok, r.counts, r.witnesses,
                     round(r.seconds, 3) if args.timing else None)
        _emit(rec)
    for r in results:
        _say(f"{'PASS' if r.ok else 'FAIL'}  {r.name:<{width}}  {r.detail}")
    failed = [r.name for r in results if not r.ok]
    _say(f"{len(results) - len(failed)}/{len(results)} checks passed" + (f"; failing: {', '.join(failed)}" if failed else ""))
    return EXIT_OK if not failed else EXIT_FALSE


# parser -------------------------------------------------------------------------

def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0), help="seed for sampled checks")
    parser.add_argument("--cap", type=int, default=d(None), help="enumeration cap (default: $DELTARING_CAP or 2^20)")
    parser.add_argument("--timing", action="store_true", default=d(False), help="record durations in reports")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deltaring", description="Unit groups and Delta_p tests for finite rings.")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        _common(p, suppress=True)
        p.set_defaults(func=func)
        return p

    p = add("units", cmd_units, "unit group summary")
    p.add_argument("ring")
    p.add_argument("-p", dest="primes", type=_prime, action="append", help="prime to test (repeatable)")

    p = add("delta", cmd_delta, "test u^p = 1 for every unit")
    p.add_argument("-p", type=_prime, required=True)
    p.add_argument("ring")

    p = add("lattice", cmd_lattice, "enumerate the ideal lattice")
    p.add_argument("ring")
    p.add_argument("--dot", metavar="FILE", help="write the Hasse diagram as DOT")

    p = add("dedekind", cmd_dedekind, "count antichains of subsets of an l-set")
    p.add_argument("l", type=int)

    p = add("family", cmd_family, "classify a named ring family")
    p.add_argument("descriptor")
    p.add_argument("-p", type=_prime, default=2)

    p = add("quiver", cmd_quiver, "Delta_p test for a path algebra")
    p.add_argument("quiver", help="quiver file, or inline text like '2; 0->1'")
    p.add_argument("--field", type=int, required=True, help="field size q")
    p.add_argument("-p", type=_prime, default=2)

    p = add("verify-paper", cmd_verify, "run the full verification suite")
    p.add_argument("--fast", action="store_true", help="skip the l=4 lattice and l=6 antichain runs")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.cap is None:
        args.cap = default_cap()
    try:
        return args.func(args)
    except CapExceeded as exc:
        _say(f"cap exceeded: {exc}")
        return EXIT_CAP
    except (SpecError, QuiverError, PresentationError, FieldConstructionError, WrongParent, UsageError) as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE
    except ConsistencyError as exc:
        _say(f"consistency failure: {exc}")
        return EXIT_FALSE
    except ValueError as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
