"""Random term generation and executable oracles for the soundness
properties: preservation (in its subtype form), progress, canonical forms,
erasure simulation, and the free-variables lemma.

Everything is deterministic given (seed, config).  Counterexamples are
greedily shrunk to subterms that still satisfy the property's precondition
and still fail.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .binding import free_vars
from .semantics import (
    DynamicError,
    FuelExhausted,
    Reduced,
    Rule,
    Stuck,
    StuckOutcome,
    Value,
    erase,
    evaluate,
    evaluate_typed,
    step_typed,
)
from .terms import (
    ERROR,
    Abs,
    App,
    Num,
    RebindAbs,
    RebindingMap,
    Sum,
    Term,
    Unbind,
    UnbindingMap,
    Var,
    is_value,
    structural_eq,
    subterms,
)
from .typecheck import TypeCheckError, synthesize
from .types import INT, Arrow, IntType, NameContext, Type, UnboundTy, canonical, subtype

METATHEORY_FUEL = 500


@dataclass(frozen=True)
class GenConfig:
    seed: int = 42
    max_depth: int = 5
    variables: tuple[str, ...] = ("a", "b", "c", "d")
    names: tuple[str, ...] = ("X", "Y")
    int_range: tuple[int, int] = (-9, 9)
    mode: str = "untyped"  # "untyped" | "typed"
    typed_bias: float = 0.5  # share of type-directed (well-typed) terms


# -- free generation ----------------------------------------------------------


def _gen_free(rng: random.Random, cfg: GenConfig, depth: int, scope: list[str]) -> Term:
    typed = cfg.mode == "typed"
    if depth <= 0:
        if scope and rng.random() < 0.5:
            return Var(rng.choice(scope))
        return Num(rng.randint(*cfg.int_range))
    kinds = ["num", "var", "sum", "abs", "app", "unbind", "rebindabs"]
    if not typed:
        kinds.append("error")
    kind = rng.choice(kinds)
    if kind == "num":
        return Num(rng.randint(*cfg.int_range))
    if kind == "var":
        if not scope:
            return Num(rng.randint(*cfg.int_range))
        return Var(rng.choice(scope))
    if kind == "error":
        return ERROR
    if kind == "sum":
        return Sum(
            _gen_free(rng, cfg, depth - 1, scope), _gen_free(rng, cfg, depth - 1, scope)
        )
    if kind == "app":
        return App(
            _gen_free(rng, cfg, depth - 1, scope), _gen_free(rng, cfg, depth - 1, scope)
        )
    if kind == "abs":
        x = rng.choice(cfg.variables)
        ann = _gen_type(rng, cfg, 2) if typed else None
        return Abs(x, ann, _gen_free(rng, cfg, depth - 1, scope + [x]))
    if kind == "unbind":
        k = rng.randint(0, 2)
        vs = rng.sample(cfg.variables, min(k, len(cfg.variables)))
        entries = tuple(
            (v, _gen_type(rng, cfg, 1) if typed else None, rng.choice(cfg.names))
            for v in vs
        )
        return Unbind(
            UnbindingMap(entries), _gen_free(rng, cfg, depth - 1, scope + list(vs))
        )
    # rebindabs
    x = rng.choice(cfg.variables)
    k = rng.randint(0, 2)
    ns = rng.sample(cfg.names, min(k, len(cfg.names)))
    entries = tuple(
        (n, _gen_type(rng, cfg, 1) if typed else None, _gen_free(rng, cfg, depth - 1, scope))
        for n in ns
    )
    ann = None
    if typed:
        ann = UnboundTy(
            NameContext(tuple((n, ty) for n, ty, _ in entries)),
            _gen_type(rng, cfg, 1),
        )
    return RebindAbs(x, ann, RebindingMap(entries), _gen_free(rng, cfg, depth - 1, scope + [x]))


# -- type-directed generation -------------------------------------------------


def _gen_type(rng: random.Random, cfg: GenConfig, depth: int) -> Type:
    if depth <= 0 or rng.random() < 0.5:
        return INT
    if rng.random() < 0.5:
        return Arrow(_gen_type(rng, cfg, depth - 1), _gen_type(rng, cfg, depth - 1))
    k = rng.randint(0, min(2, len(cfg.names)))
    ns = sorted(rng.sample(cfg.names, k))
    return UnboundTy(
        NameContext(tuple((n, _gen_type(rng, cfg, depth - 1)) for n in ns)),
        _gen_type(rng, cfg, depth - 1),
    )


def _gen_at(
    rng: random.Random,
    cfg: GenConfig,
    goal: Type,
    gamma: dict[str, Type],
    depth: int,
    fresh: list[int],
) -> Term:
    """Build a term of (a subtype of) `goal` by running the typing rules
    backwards."""
    goal = canonical(goal)
    candidates = [x for x, ty in gamma.items() if canonical(ty) == goal]
    if candidates and rng.random() < 0.3:
        return Var(rng.choice(candidates))
    if depth > 0 and rng.random() < 0.35:
        # application wrapper: goal from Arrow(t1, goal) applied to t1
        t1 = _gen_type(rng, cfg, 1)
        fun = _gen_at(rng, cfg, Arrow(t1, goal), gamma, depth - 1, fresh)
        arg = _gen_at(rng, cfg, t1, gamma, depth - 1, fresh)
        return App(fun, arg)
    match goal:
        case IntType():
            if depth > 0 and rng.random() < 0.4:
                return Sum(
                    _gen_at(rng, cfg, INT, gamma, depth - 1, fresh),
                    _gen_at(rng, cfg, INT, gamma, depth - 1, fresh),
                )
            return Num(rng.randint(*cfg.int_range))
        case Arrow(param, result):
            x = _fresh_var(fresh)
            if isinstance(param, UnboundTy) and rng.random() < 0.5:
                entries = tuple(
                    (n, ty, _gen_at(rng, cfg, ty, gamma, depth - 1, fresh))
                    for n, ty in param.ctx.entries
                )
                body = _gen_at(
                    rng, cfg, result, {**gamma, x: param.body}, depth - 1, fresh
                )
                return RebindAbs(x, param, RebindingMap(entries), body)
            body = _gen_at(rng, cfg, result, {**gamma, x: param}, depth - 1, fresh)
            return Abs(x, param, body)
        case UnboundTy(ctx, body_ty):
            entries = []
            inner: dict[str, Type] = dict(gamma)
            for n, ty in ctx.entries:
                v = _fresh_var(fresh)
                entries.append((v, ty, n))
                inner[v] = ty
                if rng.random() < 0.2:  # non-injective unbinding map
                    v2 = _fresh_var(fresh)
                    entries.append((v2, ty, n))
                    inner[v2] = ty
            body = _gen_at(rng, cfg, body_ty, inner, depth - 1, fresh)
            return Unbind(UnbindingMap(tuple(entries)), body)
    raise TypeError(f"not a type: {goal!r}")


def _fresh_var(fresh: list[int]) -> str:
    fresh[0] += 1
    return f"v{fresh[0]}"


def gen_term(cfg: GenConfig) -> Iterator[Term]:
    """Infinite deterministic stream of mode-coherent terms."""
    rng = random.Random(cfg.seed)
    while True:
        if cfg.mode == "typed" and rng.random() < cfg.typed_bias:
            goal = _gen_type(rng, cfg, 2)
            yield _gen_at(rng, cfg, goal, {}, cfg.max_depth, [0])
        else:
            yield _gen_free(rng, cfg, rng.randint(0, cfg.max_depth), [])


def gen_well_typed(cfg: GenConfig) -> Iterator[tuple[Term, Type]]:
    """Closed well-typed terms with their synthesized types."""
    rng = random.Random(cfg.seed)
    while True:
        goal = _gen_type(rng, cfg, 2)
        t = _gen_at(rng, cfg, goal, {}, cfg.max_depth, [0])
        try:
            ty = synthesize({}, t)
        except TypeCheckError:  # pragma: no cover - generator should be sound
            continue
        yield t, ty


# -- property reports ---------------------------------------------------------


@dataclass
class Counterexample:
    term: Term
    detail: str


@dataclass
class PropertyReport:
    property: str
    cases: int = 0
    fuel_exhausted: int = 0
    failures: list[Counterexample] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        from .surface import print_term

        return {
            "property": self.property,
            "cases": self.cases,
            "fuel_exhausted": self.fuel_exhausted,
            "failures": [
                {"term-src": print_term(c.term), "detail": c.detail}
                for c in self.failures
            ],
            **({"info": self.info} if self.info else {}),
        }


CheckFn = Callable[[Term], Optional[str]]


def _shrink(t: Term, failing: CheckFn) -> Term:
    """Greedy subterm shrinking: recheck the property after every step."""
    current = t
    progress = True
    while progress:
        progress = False
        for cand in subterms(current):
            if cand is current:
                continue
            if failing(cand) is not None:
                current = cand
                progress = True
                break
    return current


def _run(name: str, terms: Iterator[Term], cases: int, check: CheckFn) -> PropertyReport:
    report = PropertyReport(property=name)
    for _ in range(cases):
        t = next(terms)
        report.cases += 1
        detail = check(t)
        if detail == "FUEL":
            report.fuel_exhausted += 1
        elif detail is not None:
            small = _shrink(t, lambda c: None if check(c) in (None, "FUEL") else check(c))
            report.failures.append(Counterexample(small, check(small) or detail))
    return report


# -- individual oracles -------------------------------------------------------


def check_preservation(t: Term) -> Optional[str]:
    """Along the typed trace, every reduct synthesizes a subtype of the
    original type."""
    try:
        ty = synthesize({}, t)
    except TypeCheckError:
        return None  # precondition not met
    if free_vars(t):
        return None
    current = t
    for _ in range(METATHEORY_FUEL):
        res = step_typed(current)
        if not isinstance(res, Reduced):
            return None
        try:
            ty2 = synthesize({}, res.next)
        except TypeCheckError as exc:
            return f"reduct untypable: {exc}"
        if not subtype(ty2, ty):
            from .surface import print_type

            return f"type not preserved: {print_type(ty2)} vs {print_type(ty)}"
        current = res.next
    return "FUEL"


def check_progress(t: Term) -> Optional[str]:
    """Closed well-typed terms never get stuck along the typed trace."""
    try:
        synthesize({}, t)
    except TypeCheckError:
        return None
    if free_vars(t):
        return None
    outcome, _ = evaluate_typed(t, fuel=METATHEORY_FUEL)
    if isinstance(outcome, StuckOutcome):
        return f"stuck: {outcome.reason}"
    if isinstance(outcome, FuelExhausted):
        return "FUEL"
    return None


def check_canonical_forms(t: Term) -> Optional[str]:
    """Typed values have the shape dictated by their type."""
    if not is_value(t) or free_vars(t):
        return None
    try:
        ty = canonical(synthesize({}, t))
    except TypeCheckError:
        return None
    match ty:
        case IntType():
            ok = isinstance(t, Num)
        case UnboundTy():
            ok = isinstance(t, Unbind)
        case Arrow():
            ok = isinstance(t, (Abs, RebindAbs))
        case _:
            ok = False
    if not ok:
        return f"value shape does not match type {ty!r}"
    return None


def check_erasure_simulation(t: Term) -> Optional[str]:
    """The typed trace of t and the untyped trace of erase(t) coincide
    pointwise under erasure; the untyped run neither errs nor gets stuck."""
    try:
        synthesize({}, t)
    except TypeCheckError:
        return None
    if free_vars(t):
        return None
    out_t, tr_t = evaluate_typed(t, fuel=METATHEORY_FUEL)
    out_u, tr_u = evaluate(erase(t), fuel=METATHEORY_FUEL)
    if isinstance(out_t, FuelExhausted) or isinstance(out_u, FuelExhausted):
        return "FUEL"
    if isinstance(out_u, (DynamicError, StuckOutcome)):
        return f"untyped run of erasure failed: {out_u}"
    if len(tr_t.steps) != len(tr_u.steps):
        return f"trace lengths differ: {len(tr_t.steps)} vs {len(tr_u.steps)}"
    for i, (st, su) in enumerate(zip(tr_t.steps, tr_u.steps)):
        if not structural_eq(erase(st.result), su.result):
            return f"traces diverge at step {i}"
    if isinstance(out_t, Value) and isinstance(out_u, Value):
        if not structural_eq(erase(out_t.term), out_u.term):
            return "final values differ under erasure"
        return None
    return f"outcomes differ: {out_t} vs {out_u}"


def check_free_vars_lemma(gamma: dict, t: Term) -> Optional[str]:
    """Well-typed terms have FV(t) within dom(Gamma)."""
    try:
        synthesize(gamma, t)
    except TypeCheckError:
        return None
    extra = free_vars(t) - set(gamma)
    if extra:
        return f"free variables outside the context: {sorted(extra)}"
    return None


# -- the verify entry point ---------------------------------------------------


def run_all(
    seed: int = 42, cases: int = 1000, max_depth: int = 5
) -> list[PropertyReport]:
    cfg = GenConfig(seed=seed, max_depth=max_depth, mode="typed")

    def typed_stream() -> Iterator[Term]:
        return (t for t, _ in gen_well_typed(cfg))

    reports = [
        _run("preservation", typed_stream(), cases, check_preservation),
        _run("progress", typed_stream(), cases, check_progress),
        _run(
            "canonical-forms",
            _values_of(typed_stream()),
            cases,
            check_canonical_forms,
        ),
        _run("erasure-simulation", typed_stream(), cases, check_erasure_simulation),
        _run(
            "free-vars-lemma",
            typed_stream(),
            cases,
            lambda t: check_free_vars_lemma({}, t),
        ),
    ]
    return reports


def _values_of(terms: Iterator[Term]) -> Iterator[Term]:
    for t in terms:
        outcome, _ = evaluate_typed(t, fuel=METATHEORY_FUEL)
        if isinstance(outcome, Value):
            yield outcome.term
        else:
            yield t  # non-values pass vacuously
