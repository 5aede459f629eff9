"""Command line front end.

    ecsnet run SCENARIO [--horizon N] [--csv PATH] [--raster] [--rhythm]
    ecsnet validate SCENARIO
    ecsnet verify [--seed S] [--cases K]

Exit codes: 0 success, 1 parse/validation error or verification failure,
2 I/O error. Data goes to stdout, diagnostics to stderr. A scenario path
that does not exist but names a bundled scenario (``hco.scenario``,
``lymnaea.scenario``) loads the bundled copy.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import corpus
from .engine import resolve_step
from .model import ModelError, ValidationError
from .scenario import BUNDLED, Scenario, dump_scenario, load_bundled, parse_scenario, write_trace_csv
from .simulator import Trace, detect_rhythm, run

DEFAULT_HORIZON = 30


class _IOFailure(Exception):
    pass


def _read(path: str) -> str:
    p = Path(path)
    try:
        return p.read_text(encoding="utf-8")
    except FileNotFoundError:
        if p.name in BUNDLED and not p.parent.parts:
            return load_bundled(p.name)
        raise _IOFailure(f"{path}: no such file")
    except (OSError, UnicodeDecodeError) as exc:
        raise _IOFailure(f"{path}: {exc}")


def _load(path: str) -> Scenario:
    return parse_scenario(_read(path))


def render_raster(trace: Trace) -> str:
    names = [nr.name for nr in trace.spec.neurons]
    width = max((len(n) for n in names), default=0)
    lines = []
    for i, name in enumerate(names):
        cells = "".join("#" if step.active[i] else "." for step in trace.steps)
        lines.append(f"{name.ljust(width)} {cells}")
    return "\n".join(lines) + ("\n" if lines else "")


def cmd_run(args) -> int:
    scenario = _load(args.scenario)
    horizon = args.horizon if args.horizon is not None else scenario.horizon
    if horizon is None:
        horizon = DEFAULT_HORIZON
    trace = run(scenario.spec, horizon)

    if args.csv:
        text = write_trace_csv(trace)
        if args.csv == "-":
            sys.stdout.write(text)
        else:
            try:
                Path(args.csv).write_text(text, encoding="utf-8")
            except OSError as exc:
                raise _IOFailure(f"{args.csv}: {exc}")
    if args.raster:
        sys.stdout.write(render_raster(trace))
    if args.rhythm:
        pattern = detect_rhythm(trace, args.transient)
        names = [nr.name for nr in scenario.spec.neurons]
        print(pattern.describe(names) if pattern else "no rhythm detected")
    if not (args.csv or args.raster or args.rhythm):
        sys.stdout.write(write_trace_csv(trace))
    return 0


def cmd_validate(args) -> int:
    _load(args.scenario)
    print(f"{args.scenario}: ok")
    return 0


def cmd_verify(args, resolve=None) -> int:
    resolve = resolve or resolve_step
    passed = failed = 0
    first_bad: Optional[corpus.CaseReport] = None
    for spec in corpus.iter_corpus(args.seed, args.cases):
        report = corpus.check_network(spec, resolve=resolve)
        if report.ok:
            passed += 1
            continue
        failed += 1
        if first_bad is None or _size(spec) < _size(first_bad.spec):
            first_bad = report

    print(f"{args.cases} cases (x2 corpora): {passed} passed, {failed} failed")
    if first_bad is None:
        return 0
    for line in first_bad.failures:
        print(f"  {line}", file=sys.stderr)
    minimal = corpus.shrink(
        first_bad.spec, lambda s: not corpus.check_network(s, resolve=resolve).ok
    )
    print("minimal failing scenario:", file=sys.stderr)
    sys.stdout.write(dump_scenario(minimal, corpus.STEPS_PER_CASE))
    return 1


def _size(spec) -> tuple[int, int]:
    return (spec.n, spec.m)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecsnet", description="Simulate discrete multi-transmitter neuronal networks."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a scenario")
    p_run.add_argument("scenario")
    p_run.add_argument("--horizon", type=int, help=f"steps to simulate (default: scenario value or {DEFAULT_HORIZON})")
    p_run.add_argument("--csv", metavar="PATH", help="write the trace as CSV ('-' for stdout)")
    p_run.add_argument("--raster", action="store_true", help="print one '#'/'.' row per neuron")
    p_run.add_argument("--rhythm", action="store_true", help="print the detected rhythm")
    p_run.add_argument("--transient", type=int, help="steps skipped before rhythm detection (default: neuron count)")

    p_val = sub.add_parser("validate", help="check a scenario file")
    p_val.add_argument("scenario")

    p_ver = sub.add_parser("verify", help="differential test of engine vs oracle")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--cases", type=int, default=1000)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": cmd_run, "validate": cmd_validate, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        for v in exc.violations:
            print(f"{getattr(args, 'scenario', '')}: {v}", file=sys.stderr)
        return 1
    except ModelError as exc:
        print(f"{getattr(args, 'scenario', '')}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
