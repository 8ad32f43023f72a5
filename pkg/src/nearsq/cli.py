"""Command-line entry point; every result is a JSON object on its own line.

Record schema (stable field names):

    command      subcommand name
    params       the full RunConfig used for the run
    subject      what the record is about (a term, a parameter range, an equation)
    verdict      "pass" | "fail" | "violation" | "critical" | "info"
    certified    whether every number in the record is rigorously certified
    duration_ms  wall time; excluded from determinism guarantees
    ...          command-specific witness fields

Exit codes: 0 success with no violations, 2 violations or CRITICAL findings or
failed checks, 1 usage, resource or interruption errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, TextIO

THREADS_ENV = "NEARSQ_THREADS"
EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2, which is reserved for violations
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    ranges: dict[str, Any] = field(default_factory=dict)
    bits: int | None = None
    threads: int = 1
    checkpoint: str | None = None
    report: str | None = None
    full: bool = False


class Sink:
    """Single ordered writer for report records."""

    def __init__(self, config: RunConfig, stream: TextIO):
        self.config = config
        self.stream = stream

    def emit(self, subject: Any, verdict: str, certified: bool = True, duration_ms: float | None = None, **fields) -> None:
        rec = {"command": self.config.command, "params": asdict(self.config), "subject": subject,
               "verdict": verdict, "certified": certified, **fields}
        rec["duration_ms"] = None if duration_ms is None else round(duration_ms, 3)
        self.stream.write(json.dumps(rec, sort_keys=False, default=str) + "\n")
        self.stream.flush()


def _ms(start: float) -> float:
    return (time.perf_counter() - start) * 1000


# Subcommands


def cmd_seq(args, sink: Sink) -> int:
    from .sequences import RecurrenceParams, SequenceKind, term

    params = RecurrenceParams.with_b1(args.a, args.b1) if args.b1 is not None else RecurrenceParams(args.a, args.b)
    kind = SequenceKind(args.kind)
    indices = range(args.n, (args.n_to if args.n_to is not None else args.n) + 1)
    for n in indices:
        start = time.perf_counter()
        value = term(params, kind, n)
        sink.emit({"a": params.a, "b": params.b, "kind": kind.value, "n": n}, "info", value=str(value),
                  duration_ms=_ms(start))
    return EXIT_OK


def cmd_classify(args, sink: Sink) -> int:
    from .nearsquare import classify, square_decompose

    start = time.perf_counter()
    dec = square_decompose(args.value)
    cls = classify(args.value)
    sink.emit({"value": str(args.value)}, "info", certified=cls.certified and dec.resolved and not dec.probable,
              kernel=dec.kernel, root=dec.root, **{"class": cls.label}, near_square=cls.is_near_square,
              unresolved=[str(u) for u in dec.unresolved], probable_prime=dec.probable, duration_ms=_ms(start))
    return EXIT_OK


def _emit_scan(report, sink: Sink, critical: bool) -> int:
    for f in report.findings:
        verdict = "critical" if f.flag == "CRITICAL" else "info"
        sink.emit({"n": f.n, "a": f.a, "b": f.b}, verdict, certified=f.certified, kernel=f.kernel, root=f.root,
                  **{"class": f.label}, flag=f.flag)
    for u in report.unresolved:
        sink.emit(u, "info", certified=False, note="factorisation budget exhausted")
    bad = bool(report.critical) or not report.revalidated
    sink.emit({"box": report.box}, "fail" if bad else "pass", terms=report.terms,
              findings=[[f.n, f.a, f.b, f.kernel] for f in report.findings],
              negative_kernel_hits=[[f.n, f.a, f.b, f.kernel] for f in report.signed],
              unresolved=len(report.unresolved), skipped=report.skipped, revalidated=report.revalidated,
              duration_ms=report.seconds * 1000)
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_scan_conjecture(args, sink: Sink) -> int:
    from .scanner import CONJECTURE_N_MIN, CONTEXT_N_MIN, scan_conjecture

    n_min = args.n_min if args.n_min is not None else (CONTEXT_N_MIN if args.context else CONJECTURE_N_MIN)
    rep = scan_conjecture(args.a_max, args.b1_max, args.n_max, n_min, args.context, args.threads,
                          args.checkpoint, args.stop_after)
    return _emit_scan(rep, sink, critical=False)


def cmd_scan_theorem(args, sink: Sink) -> int:
    from .scanner import CONTEXT_N_MIN, THEOREM_N_MIN, scan_theorem

    n_min = args.n_min if args.n_min is not None else (CONTEXT_N_MIN if args.context else THEOREM_N_MIN)
    rep = scan_theorem(args.c_max, args.n_max, n_min, args.context, args.c_min, args.threads,
                       args.checkpoint, args.stop_after)
    return _emit_scan(rep, sink, critical=True)


def cmd_reduce(args, sink: Sink) -> int:
    from .cf_reduction import CONSTANT_NOTE, DESK_MAX, PARAMETER_RANGES, CaseKind, run_reduction

    kind = CaseKind(args.case)
    lo, hi = PARAMETER_RANGES[kind]
    first = args.min if args.min is not None else lo
    last = args.max if args.max is not None else (hi if args.full else DESK_MAX[kind])
    if last > DESK_MAX[kind] and not args.full:
        raise UsageError(f"{kind.value} beyond {DESK_MAX[kind]} needs --full")
    if not lo <= first <= last <= hi:
        raise UsageError(f"{kind.value} range must lie within {lo}..{hi}")
    summary = run_reduction(kind, first, last, args.threads, args.checkpoint, args.stop_after, args.chunk, args.bits)
    for f in summary.fired_admissible:
        sink.emit({"case": kind.value, "parameter": f["parameter"], "p": f["p"], "q": f["q"]},
                  "violation" if f["outcome"] == "accept" else "info", fired=True, secondary=f["outcome"],
                  reason=f["reason"], linear_form=f["linear_form"], m_values=f["m_values"], witness=f["witness"])
    for u in summary.undecided:
        sink.emit({"case": kind.value, **u}, "fail", certified=False)
    bad = not summary.ok
    sink.emit({"case": kind.value, "first": first, "last": last}, "fail" if bad else "pass",
              parameters=summary.parameters, convergents_examined=summary.convergents_examined,
              direct_pairs_examined=summary.direct_pairs_examined,
              violations=len(summary.violations), fired_admissible=len(summary.fired_admissible),
              fired_inadmissible=summary.fired_inadmissible, undecided=len(summary.undecided),
              classical_bound_failures=summary.classical_bound_failures, max_bits=summary.max_bits,
              note=CONSTANT_NOTE, duration_ms=summary.seconds * 1000)
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_estimates(args, sink: Sink) -> int:
    from .algebraics import analytic_bounds_selfcheck, random_large_samples, verify_estimates

    start = time.perf_counter()
    bits = args.bits or 192
    a_big, c_big = random_large_samples(args.random) if args.random else ([], [])
    rep = verify_estimates(list(range(4, args.a_max + 1)) + a_big, list(range(2, args.c_max + 1)) + c_big, bits,
                           args.cap)
    selfcheck = analytic_bounds_selfcheck()
    bad = not rep.ok or not selfcheck.ok
    for e in rep.failures + rep.undecided:
        sink.emit({"inequality": e.inequality, "parameter": e.parameter}, "fail", certified=e.verdict != "undecided",
                  outcome=e.verdict, bits=e.bits)
    sink.emit({"a_max": args.a_max, "c_max": args.c_max, "random": args.random}, "fail" if bad else "pass",
              checks=rep.checks, passed=rep.passed, failures=len(rep.failures), undecided=len(rep.undecided),
              max_bits=rep.max_bits, selfcheck_checks=selfcheck.checks, selfcheck_failures=selfcheck.failures,
              ell1_behaviour=rep.ell1_behaviour, duration_ms=_ms(start))
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_units(args, sink: Sink) -> int:
    from .units import verify_a3_note, verify_conjugation_table, verify_unit_groups

    start = time.perf_counter()
    rep = verify_unit_groups(range(2, args.c_max + 1), range(4, args.a_max + 1), args.bits or 256)
    table = verify_conjugation_table(2) + verify_conjugation_table(3)
    note = verify_a3_note()
    for e in rep.failures:
        sink.emit({"order": e.order, "parameter": e.parameter}, "fail", norms=e.norms, determinant=e.determinant)
    bad = not rep.ok or not all(t.holds for t in table)
    sink.emit({"c_max": args.c_max, "a_max": args.a_max}, "fail" if bad else "pass", entries=len(rep.entries),
              undecided=rep.undecided, conjugation_identities=len(table), a3_note=note, scope=rep.note,
              duration_ms=_ms(start))
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_oracles(args, sink: Sink) -> int:
    from .oracles import run_oracles

    start = time.perf_counter()
    rep = run_oracles(args.bound, args.a_max)
    for rec in rep.quartics + rep.congruences + rep.families:
        subject = rec.get("problem") or rec.get("form")
        sink.emit(subject, "pass" if rec["matches"] else "fail",
                  **{k: v for k, v in rec.items() if k not in ("problem", "form", "matches")})
    sink.emit({"bound": args.bound, "a_max": args.a_max}, "pass" if rep.ok else "fail", duration_ms=_ms(start))
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_props(args, sink: Sink) -> int:
    from .scanner import verify_small_props

    start = time.perf_counter()
    rep = verify_small_props(args.n_cap, args.a_cap)
    sink.emit({"n_cap": args.n_cap, "a_cap": args.a_cap}, "pass" if rep.ok else "fail", **rep.to_record(),
              duration_ms=_ms(start))
    return EXIT_OK if rep.ok else EXIT_VIOLATION


COMMANDS: dict[str, Callable] = {
    "seq": cmd_seq, "classify": cmd_classify, "scan-conjecture": cmd_scan_conjecture,
    "scan-theorem": cmd_scan_theorem, "reduce": cmd_reduce, "estimates": cmd_estimates, "units": cmd_units,
    "oracles": cmd_oracles, "props": cmd_props,
}


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help=f"worker processes (default ${THREADS_ENV} or 1)")
    common.add_argument("--bits", type=int, default=None, help="working precision override")
    common.add_argument("--checkpoint", type=Path, default=None, help="checkpoint file for resumable scans")
    common.add_argument("--report", type=Path, default=None, help="append records to this file instead of stdout")
    common.add_argument("--stop-after", type=int, default=None, help=argparse.SUPPRESS)

    p = _Parser(prog="nearsq", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("seq", parents=[common], help="print sequence terms")
    s.add_argument("--a", type=int, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--b", type=int, default=-1)
    g.add_argument("--b1", type=int)
    s.add_argument("--kind", choices=["u", "v", "t", "w"], default="u")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--n-to", type=int, default=None)

    s = sub.add_parser("classify", parents=[common], help="kernel, root and class of an integer")
    s.add_argument("--value", type=int, required=True)

    s = sub.add_parser("scan-conjecture", parents=[common], help="near-squares over (a, b1, n)")
    s.add_argument("--a-max", type=int, required=True)
    s.add_argument("--b1-max", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--n-min", type=int, default=None)
    s.add_argument("--context", action="store_true", help="allow n <= 8")

    s = sub.add_parser("scan-theorem", parents=[common], help="u_N(c^2+1) in S, cS or pS")
    s.add_argument("--c-max", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--c-min", type=int, default=2)
    s.add_argument("--n-min", type=int, default=None)
    s.add_argument("--context", action="store_true", help="allow N <= 4")

    s = sub.add_parser("reduce", parents=[common], help="continued-fraction reduction checks")
    s.add_argument("--case", choices=["iiia1", "iiia2", "iiib", "iiic"], required=True)
    s.add_argument("--min", "--c-min", "--a-min", dest="min", type=int, default=None)
    s.add_argument("--max", "--c-max", "--a-max", dest="max", type=int, default=None)
    s.add_argument("--full", action="store_true", help="allow the full published parameter range")
    s.add_argument("--chunk", type=int, default=1000, help="parameters per checkpointed shard")

    s = sub.add_parser("estimates", parents=[common], help="certified estimate inequalities")
    s.add_argument("--a-max", type=int, default=10**4)
    s.add_argument("--c-max", type=int, default=10**3)
    s.add_argument("--random", type=int, default=1000, help="random large a and c samples")
    s.add_argument("--cap", type=int, default=1024, help="precision escalation cap in bits")

    s = sub.add_parser("units", parents=[common], help="unit norms and log-rank separation")
    s.add_argument("--c-max", type=int, default=200)
    s.add_argument("--a-max", type=int, default=200)

    s = sub.add_parser("oracles", parents=[common], help="bounded Diophantine searches")
    s.add_argument("--bound", type=int, default=1000)
    s.add_argument("--a-max", type=int, default=10**4)

    s = sub.add_parser("props", parents=[common], help="small-index square facts")
    s.add_argument("--n-cap", type=int, default=60)
    s.add_argument("--a-cap", type=int, default=400)
    return p


def _ranges(args) -> dict:
    skip = {"command", "threads", "bits", "checkpoint", "report", "full", "stop_after"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def run(argv: list[str] | None = None, stream: TextIO | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.threads is None:
            args.threads = _default_threads()
        config = RunConfig(args.command, _ranges(args), args.bits, args.threads,
                           str(args.checkpoint) if args.checkpoint else None,
                           str(args.report) if args.report else None, bool(getattr(args, "full", False)))
        if args.report is not None:
            with open(args.report, "a") as fh:
                return COMMANDS[args.command](args, Sink(config, fh))
        return COMMANDS[args.command](args, Sink(config, stream or sys.stdout))
    except (UsageError, ValueError) as exc:
        print(f"nearsq: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except KeyboardInterrupt:
        print("nearsq: interrupted; completed rows are in the checkpoint", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # noqa: BLE001
        from .sweep import SweepInterrupted

        if isinstance(exc, SweepInterrupted):
            print(f"nearsq: {exc}; completed rows are in the checkpoint", file=sys.stderr)
            return EXIT_ERROR
        if isinstance(exc, MemoryError):
            print("nearsq: out of memory", file=sys.stderr)
            return EXIT_ERROR
        raise


def main() -> None:
    sys.exit(run())
