"""Bundled example programs with their expected results."""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .semantics import (
    DynamicError,
    StuckOutcome,
    Value,
    evaluate,
    evaluate_typed,
)
from .surface import parse_program, print_term
from .terms import structural_eq
from .typecheck import TypeCheckError, synthesize


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    expect: str  # "value" | "error" | "stuck" | "type_error"
    value: Optional[str] = None  # surface syntax of the expected value
    rules: Optional[tuple[str, ...]] = None  # expected rule-label sequence
    type: Optional[str] = None  # expected synthesized type (typed entries)
    stuck_term: Optional[str] = None  # expected final term when stuck


ENTRIES: tuple[CorpusEntry, ...] = (
    CorpusEntry("intro_ok", "value", value="3"),
    CorpusEntry("intro_err", "error", rules=("AppRebindERR",)),
    CorpusEntry(
        "example1",
        "value",
        value="7",
        rules=("App", "AppRebindOK", "Sum", "AppRebindOK", "Sum", "Sum"),
    ),
    CorpusEntry("example2_static", "value", value="4"),
    CorpusEntry("example2_dynamic", "value", value="6"),
    CorpusEntry("example3", "value", value="2"),
    CorpusEntry("cms", "value", value="3"),
    CorpusEntry("typed_intro", "value", value="3", type="int"),
    CorpusEntry(
        "typed_example1",
        "value",
        value="7",
        type="int",
        rules=("App", "AppRebind", "Sum", "AppRebind", "Sum", "Sum"),
    ),
    CorpusEntry(
        "typed_mismatch",
        "type_error",
        stuck_term="(3 2)+4",
    ),
    CorpusEntry("typed_example3", "value", value="2", type="int"),
    CorpusEntry("typed_cms", "value", value="3", type="int"),
)


def load_source(name: str) -> str:
    return (
        resources.files("ulc").joinpath("corpus").joinpath(f"{name}.ulc").read_text()
    )


@dataclass
class CorpusResult:
    name: str
    ok: bool
    expected: str
    actual: str


def run_entry(entry: CorpusEntry, fuel: int = 10_000) -> CorpusResult:
    from .surface import parse, print_type

    term, mode = parse_program(load_source(entry.name))
    problems: list[str] = []
    actual_bits: list[str] = []

    if mode == "typed":
        try:
            ty = synthesize({}, term)
            actual_bits.append(f"type {print_type(ty)}")
            if entry.expect == "type_error":
                problems.append("expected a type error, term typechecked")
            elif entry.type is not None and print_type(ty) != entry.type:
                problems.append(f"type mismatch: {print_type(ty)} != {entry.type}")
        except TypeCheckError as exc:
            actual_bits.append(f"type error {exc.kind}")
            if entry.expect != "type_error":
                problems.append(f"unexpected type error: {exc}")
        outcome, trace = evaluate_typed(term, fuel=fuel)
    else:
        outcome, trace = evaluate(term, fuel=fuel)

    match outcome:
        case Value(v):
            actual_bits.append(f"value {print_term(v)}")
            if entry.expect != "value" or (
                entry.value is not None
                and not structural_eq(v, parse(entry.value))
            ):
                problems.append(f"outcome value {print_term(v)}")
        case DynamicError():
            actual_bits.append("error")
            if entry.expect != "error":
                problems.append("outcome error")
        case StuckOutcome(final, reason):
            actual_bits.append(f"stuck {reason} at {print_term(final)}")
            if entry.expect not in ("stuck", "type_error"):
                problems.append(f"outcome stuck: {reason}")
            elif entry.stuck_term is not None and not structural_eq(
                final, parse(entry.stuck_term)
            ):
                problems.append(f"stuck at {print_term(final)}, not {entry.stuck_term}")
        case _:
            actual_bits.append("fuel exhausted")
            problems.append("fuel exhausted")

    if entry.rules is not None:
        got = tuple(str(s.rule) for s in trace.steps)
        if got != entry.rules:
            problems.append(f"rule sequence {got}")

    expected = entry.expect + (f" {entry.value}" if entry.value else "")
    return CorpusResult(
        entry.name,
        not problems,
        expected,
        "; ".join(actual_bits if not problems else actual_bits + problems),
    )


def run_corpus(fuel: int = 10_000) -> list[CorpusResult]:
    return [run_entry(e, fuel=fuel) for e in ENTRIES]
