"""Command-line interface: eval, trace, typecheck, verify, corpus.

Exit codes: 0 value / success, 1 dynamic error (or verify counterexample),
2 stuck, 3 type error, 4 parse error, 5 fuel exhausted, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .corpus import run_corpus
from .metatheory import run_all
from .semantics import (
    DynamicError,
    FuelExhausted,
    StuckOutcome,
    Trace,
    Value,
    evaluate,
    evaluate_typed,
)
from .surface import ParseError, parse_program, print_term, print_type
from .typecheck import TypeCheckError, synthesize

EXIT_VALUE = 0
EXIT_ERROR = 1
EXIT_STUCK = 2
EXIT_TYPE_ERROR = 3
EXIT_PARSE_ERROR = 4
EXIT_FUEL = 5
EXIT_USAGE = 64


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def _default_fuel() -> int:
    env = os.environ.get("ULC_FUEL")
    return int(env) if env else 10_000


def _load(args) -> tuple:
    mode_hint = None
    if getattr(args, "typed", False):
        mode_hint = "typed"
    elif getattr(args, "untyped", False):
        mode_hint = "untyped"
    return parse_program(_read(args.file), mode_hint)


def _outcome_exit(outcome, quiet_trace: bool = False) -> int:
    match outcome:
        case Value(v):
            print(f"value: {print_term(v)}")
            return EXIT_VALUE
        case DynamicError():
            print("error")
            return EXIT_ERROR
        case StuckOutcome(term, reason):
            print(f"stuck: {reason} at {print_term(term)}")
            return EXIT_STUCK
        case FuelExhausted(_, used):
            print(f"fuel exhausted after {used} steps")
            return EXIT_FUEL
    raise AssertionError(outcome)


def cmd_eval(args) -> int:
    term, mode = _load(args)
    run = evaluate_typed if mode == "typed" else evaluate
    outcome, _ = run(term, fuel=args.fuel)
    return _outcome_exit(outcome)


def _trace_json(trace: Trace) -> dict:
    outcome = trace.outcome
    match outcome:
        case Value(v):
            out = {"kind": "value", "term": print_term(v)}
        case DynamicError():
            out = {"kind": "error"}
        case StuckOutcome(term, reason):
            out = {"kind": "stuck", "term": print_term(term), "reason": str(reason)}
        case FuelExhausted(term, _):
            out = {"kind": "fuel-exhausted", "term": print_term(term)}
        case _:
            out = {"kind": "unknown"}
    return {
        "steps": [
            {"from": print_term(s.source), "rule": str(s.rule), "to": print_term(s.result)}
            for s in trace.steps
        ],
        "outcome": out,
    }


def cmd_trace(args) -> int:
    term, mode = _load(args)
    run = evaluate_typed if mode == "typed" else evaluate
    outcome, trace = run(term, fuel=args.fuel)
    if args.format == "json":
        print(json.dumps(_trace_json(trace), indent=2))
        match outcome:
            case Value(_):
                return EXIT_VALUE
            case DynamicError():
                return EXIT_ERROR
            case StuckOutcome(_, _):
                return EXIT_STUCK
            case _:
                return EXIT_FUEL
    for s in trace.steps:
        print(f"{print_term(s.source)}  --{s.rule}-->  {print_term(s.result)}")
    return _outcome_exit(outcome)


def cmd_typecheck(args) -> int:
    term, mode = _load(args)
    if mode != "typed":
        print("typecheck requires a typed term", file=sys.stderr)
        return EXIT_USAGE
    try:
        ty = synthesize({}, term)
    except TypeCheckError as exc:
        print(f"type error: {exc}")
        return EXIT_TYPE_ERROR
    print(print_type(ty))
    return EXIT_VALUE


def cmd_verify(args) -> int:
    reports = run_all(seed=args.seed, cases=args.cases, max_depth=args.depth)
    failed = False
    for r in reports:
        status = "ok" if r.ok else "FAIL"
        extra = f", {r.fuel_exhausted} fuel-exhausted" if r.fuel_exhausted else ""
        print(f"{r.property}: {status} ({r.cases} cases{extra})")
        for c in r.failures:
            failed = True
            print(f"  counterexample: {print_term(c.term)}")
            print(f"    {c.detail}")
    if args.format == "json":
        print(json.dumps([r.to_dict() for r in reports], indent=2))
    return EXIT_ERROR if failed else EXIT_VALUE


def cmd_corpus(args) -> int:
    results = run_corpus()
    width = max(len(r.name) for r in results)
    bad = False
    for r in results:
        mark = "PASS" if r.ok else "FAIL"
        bad = bad or not r.ok
        print(f"{r.name:<{width}}  {mark}  expected: {r.expected}  got: {r.actual}")
    return EXIT_ERROR if bad else EXIT_VALUE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ulc", description="Lambda calculus with unbind/rebind."
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_input(sp):
        sp.add_argument("file", help="source file, or - for stdin")
        mode = sp.add_mutually_exclusive_group()
        mode.add_argument("--typed", action="store_true", help="force typed mode")
        mode.add_argument("--untyped", action="store_true", help="force untyped mode")
        sp.add_argument("--fuel", type=int, default=_default_fuel())

    sp = sub.add_parser("eval", help="evaluate a term and print the outcome")
    add_input(sp)
    sp.set_defaults(fn=cmd_eval)

    sp = sub.add_parser("trace", help="print every reduction step")
    add_input(sp)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(fn=cmd_trace)

    sp = sub.add_parser("typecheck", help="synthesize the type of a typed term")
    add_input(sp)
    sp.set_defaults(fn=cmd_typecheck)

    sp = sub.add_parser("verify", help="run the metatheory property suites")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--cases", type=int, default=1000)
    sp.add_argument("--depth", type=int, default=5)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("corpus", help="run the bundled examples")
    sp.set_defaults(fn=cmd_corpus)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except FileNotFoundError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
