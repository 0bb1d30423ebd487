"""Call-by-value small-step evaluation.

The evaluation-context grammar ([] | E+t | n+E | E t | v E) is deterministic,
so decomposition is done by structural recursion rather than an explicit
context datatype.  Trace steps are labelled with the rule that fired at the
redex.

The untyped rules include the dynamic check on rebinding (AppRebindOK /
AppRebindERR) and error propagation (ContError collapses a nested error in a
single step).  The typed rules replace the pair with the unconditional
AppRebind and have no error rules; stuck outcomes remain reachable for
ill-typed inputs.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .binding import FreshSupply, subst
from .terms import (
    ERROR,
    Abs,
    App,
    Error,
    Num,
    RebindAbs,
    Sum,
    Term,
    Unbind,
    Var,
    is_value,
)
from .types import Type


class Rule(str, enum.Enum):
    SUM = "Sum"
    APP = "App"
    APP_REBIND_OK = "AppRebindOK"
    APP_REBIND_ERR = "AppRebindERR"
    APP_REBIND = "AppRebind"
    CONT = "Cont"
    CONT_ERROR = "ContError"

    def __str__(self) -> str:
        return self.value


class StuckKind(str, enum.Enum):
    APPLY_NON_FUNCTION = "ApplyNonFunction"
    SUM_NON_INT = "SumNonInt"
    REBIND_ABS_APPLIED_TO_NON_UNBIND = "RebindAbsAppliedToNonUnbind"
    REBIND_MISSING_NAME = "RebindMissingName"
    OPEN_UNBIND = "OpenUnbind"
    FREE_VARIABLE = "FreeVariable"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class StuckDiag:
    kind: StuckKind
    at: Term

    def __str__(self) -> str:
        return self.kind.value


# -- StepResult -------------------------------------------------------------


@dataclass(frozen=True)
class StepResult:
    pass


@dataclass(frozen=True)
class Reduced(StepResult):
    next: Term
    rule: Rule


@dataclass(frozen=True)
class AlreadyValue(StepResult):
    pass


@dataclass(frozen=True)
class ErrorResult(StepResult):
    pass


@dataclass(frozen=True)
class Stuck(StepResult):
    reason: StuckDiag


# -- internal stepping ------------------------------------------------------

_VALUE = ("value",)


def _step(t: Term, supply: FreshSupply, typed: bool):
    """Returns one of:
    ("value",) — t is a value;
    ("reduced", t', rule) — one step inside t;
    ("error", fresh) — t transitions to error; fresh=True iff the redex is t
        itself (AppRebindERR fired at an empty context);
    ("stuck", diag).
    """
    match t:
        case Num() | Abs() | RebindAbs():
            return _VALUE
        case Error():
            return ("error", False)
        case Var(x):
            return ("stuck", StuckDiag(StuckKind.FREE_VARIABLE, t))
        case Unbind():
            if is_value(t):
                return _VALUE
            return ("stuck", StuckDiag(StuckKind.OPEN_UNBIND, t))
        case Sum(l, r):
            res = _step(l, supply, typed)
            if res[0] == "reduced":
                return ("reduced", Sum(res[1], r), res[2])
            if res[0] == "error":
                return ("error", False)
            if res[0] == "stuck":
                return res
            if not isinstance(l, Num):
                return ("stuck", StuckDiag(StuckKind.SUM_NON_INT, t))
            res = _step(r, supply, typed)
            if res[0] == "reduced":
                return ("reduced", Sum(l, res[1]), res[2])
            if res[0] == "error":
                return ("error", False)
            if res[0] == "stuck":
                return res
            if not isinstance(r, Num):
                return ("stuck", StuckDiag(StuckKind.SUM_NON_INT, t))
            return ("reduced", Num(l.value + r.value), Rule.SUM)
        case App(f, a):
            res = _step(f, supply, typed)
            if res[0] == "reduced":
                return ("reduced", App(res[1], a), res[2])
            if res[0] == "error":
                return ("error", False)
            if res[0] == "stuck":
                return res
            res = _step(a, supply, typed)
            if res[0] == "reduced":
                return ("reduced", App(f, res[1]), res[2])
            if res[0] == "error":
                return ("error", False)
            if res[0] == "stuck":
                return res
            return _apply(t, f, a, supply, typed)
    raise TypeError(f"not a term: {t!r}")


def _apply(t: Term, f: Term, a: Term, supply: FreshSupply, typed: bool):
    match f:
        case Abs(x, _, body):
            return ("reduced", subst(body, {x: a}, supply), Rule.APP)
        case RebindAbs(x, _, rmap, body):
            if not isinstance(a, Unbind):
                return (
                    "stuck",
                    StuckDiag(StuckKind.REBIND_ABS_APPLIED_TO_NON_UNBIND, t),
                )
            covered = a.umap.names() <= rmap.domain()
            if not typed and not covered:
                return ("error", True)  # AppRebindERR
            if typed and not covered:
                return ("stuck", StuckDiag(StuckKind.REBIND_MISSING_NAME, t))
            sigma = {
                v: rmap.term_of(name) for v, _, name in a.umap.entries
            }
            rebound = subst(a.body, sigma, supply)
            rule = Rule.APP_REBIND if typed else Rule.APP_REBIND_OK
            return ("reduced", subst(body, {x: rebound}, supply), rule)
    return ("stuck", StuckDiag(StuckKind.APPLY_NON_FUNCTION, t))


def _step_public(t: Term, supply: Optional[FreshSupply], typed: bool) -> StepResult:
    supply = supply or FreshSupply()
    res = _step(t, supply, typed)
    if res[0] == "value":
        return AlreadyValue()
    if res[0] == "reduced":
        return Reduced(res[1], res[2])
    if res[0] == "stuck":
        return Stuck(res[1])
    # error
    if isinstance(t, Error):
        return ErrorResult()
    if res[1]:
        # AppRebindERR fired at the top of the term: the reduct is `error`.
        return Reduced(ERROR, Rule.APP_REBIND_ERR)
    return ErrorResult()


def step(t: Term, supply: Optional[FreshSupply] = None) -> StepResult:
    """One untyped step (rules Sum, App, AppRebindOK/ERR, Cont, ContError)."""
    return _step_public(t, supply, typed=False)


def step_typed(t: Term, supply: Optional[FreshSupply] = None) -> StepResult:
    """One typed step: AppRebind fires unconditionally, no error rules."""
    return _step_public(t, supply, typed=True)


# -- traces and outcomes ----------------------------------------------------


@dataclass(frozen=True)
class EvalOutcome:
    pass


@dataclass(frozen=True)
class Value(EvalOutcome):
    term: Term


@dataclass(frozen=True)
class DynamicError(EvalOutcome):
    pass


@dataclass(frozen=True)
class StuckOutcome(EvalOutcome):
    term: Term
    reason: StuckDiag


@dataclass(frozen=True)
class FuelExhausted(EvalOutcome):
    term: Term
    steps_used: int


@dataclass(frozen=True)
class TraceStep:
    source: Term
    rule: Rule
    result: Term


@dataclass
class Trace:
    steps: list[TraceStep] = field(default_factory=list)
    outcome: Optional[EvalOutcome] = None


DEFAULT_FUEL = 10_000


def _evaluate(t, fuel, supply, typed) -> tuple[EvalOutcome, Trace]:
    supply = supply or FreshSupply()
    trace = Trace()
    stepper = step_typed if typed else step
    current = t
    for used in range(fuel + 1):
        res = stepper(current, supply)
        match res:
            case AlreadyValue():
                trace.outcome = Value(current)
                return trace.outcome, trace
            case ErrorResult():
                if not isinstance(current, Error):
                    trace.steps.append(TraceStep(current, Rule.CONT_ERROR, ERROR))
                trace.outcome = DynamicError()
                return trace.outcome, trace
            case Stuck(reason):
                trace.outcome = StuckOutcome(current, reason)
                return trace.outcome, trace
            case Reduced(nxt, rule):
                if used == fuel:
                    break
                trace.steps.append(TraceStep(current, rule, nxt))
                current = nxt
    trace.outcome = FuelExhausted(current, len(trace.steps))
    return trace.outcome, trace


def evaluate(
    t: Term, fuel: int = DEFAULT_FUEL, supply: Optional[FreshSupply] = None
) -> tuple[EvalOutcome, Trace]:
    """Iterate untyped steps until a value, error, stuck term, or fuel out."""
    return _evaluate(t, fuel, supply, typed=False)


def evaluate_typed(
    t: Term, fuel: int = DEFAULT_FUEL, supply: Optional[FreshSupply] = None
) -> tuple[EvalOutcome, Trace]:
    return _evaluate(t, fuel, supply, typed=True)


# -- erasure ----------------------------------------------------------------


def erase(t: Term) -> Term:
    """Drop all type annotations and map decorations."""
    from .terms import RebindingMap, UnbindingMap

    match t:
        case Var() | Num() | Error():
            return t
        case Sum(l, r):
            return Sum(erase(l), erase(r))
        case App(f, a):
            return App(erase(f), erase(a))
        case Abs(x, _, body):
            return Abs(x, None, erase(body))
        case Unbind(umap, body):
            return Unbind(
                UnbindingMap(tuple((v, None, n) for v, _, n in umap.entries)),
                erase(body),
            )
        case RebindAbs(x, _, rmap, body):
            return RebindAbs(
                x,
                None,
                RebindingMap(tuple((n, None, erase(s)) for n, _, s in rmap.entries)),
                erase(body),
            )
    raise TypeError(f"not a term: {t!r}")
