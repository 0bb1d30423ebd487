"""Negative controls: plant the two most tempting implementation mistakes and
show that the suite's oracles reject them.

Control 1 — dropping the dynamic rebinding check.  An evaluator that used the
typed rule (rebind unconditionally, no error transitions) for untyped
programs would be caught by the bundled examples: the program whose rebinding
map misses a name must raise a dynamic error, not get stuck.

Control 2 — capture-naive substitution.  A substitution that pushes under
unbinders without renaming silently captures free variables.  The renaming
implementation and the naive one disagree observably on a two-line term.
"""
from ulc.binding import alpha_equiv, free_vars, subst
from ulc.corpus import load_source
from ulc.semantics import (
    DynamicError,
    StuckKind,
    StuckOutcome,
    Value,
    erase,
    evaluate,
    evaluate_typed,
)
from ulc.surface import parse, parse_program
from ulc.terms import (
    Abs,
    App,
    Error,
    Num,
    RebindAbs,
    RebindingMap,
    Sum,
    Unbind,
    UnbindingMap,
    Var,
)


class TestMissingDynamicCheck:
    def test_typed_rules_on_the_error_example_do_not_error(self):
        term, _ = parse_program(load_source("intro_err"))
        mutated, _ = evaluate_typed(term)  # the planted bug
        correct, _ = evaluate(term)
        assert correct == DynamicError()
        assert isinstance(mutated, StuckOutcome)
        assert mutated.reason.kind == StuckKind.REBIND_MISSING_NAME
        # so the corpus expectation ("error") flags the mutation
        assert mutated != correct


def naive_subst(t, sigma):
    """Substitution with no capture avoidance: binders only shadow."""
    match t:
        case Var(x):
            return sigma.get(x, t)
        case Num() | Error():
            return t
        case Sum(l, r):
            return Sum(naive_subst(l, sigma), naive_subst(r, sigma))
        case App(f, a):
            return App(naive_subst(f, sigma), naive_subst(a, sigma))
        case Abs(x, ann, body):
            inner = {k: v for k, v in sigma.items() if k != x}
            return Abs(x, ann, naive_subst(body, inner))
        case Unbind(umap, body):
            inner = {k: v for k, v in sigma.items() if k not in umap.domain()}
            return Unbind(umap, naive_subst(body, inner))
        case RebindAbs(x, ann, rmap, body):
            entries = tuple(
                (n, ty, naive_subst(s, sigma)) for n, ty, s in rmap.entries
            )
            inner = {k: v for k, v in sigma.items() if k != x}
            return RebindAbs(x, ann, RebindingMap(entries), naive_subst(body, inner))
    raise TypeError


class TestCaptureNaiveSubstitution:
    def test_unbinder_captures_the_substituted_variable(self):
        t = parse("<x=>X | y x>")
        sigma = {"y": parse("\\z.x")}
        good = subst(t, sigma)
        bad = naive_subst(t, sigma)
        assert alpha_equiv(good, parse("<x#1=>X | (\\z.x) x#1>"))
        assert not alpha_equiv(good, bad)
        # the capture is visible in the free variables: the x inside \z.x
        # stays free in the correct result but vanishes in the naive one
        assert "x" in free_vars(good)
        assert free_vars(bad) == frozenset()

    def test_the_capture_changes_evaluation_results(self):
        # let x=1 in let y=\z.x in rebind-X-to-7 <x=>X | y x>
        src = "(\\x.(\\y.(\\w[X=>7].w) <x=>X | y x>) (\\z.x)) 1"
        outcome, _ = evaluate(parse(src))
        assert outcome == Value(Num(1))  # static binding of x is respected

        # a capture-naive evaluator reaches <x=>X | (\z.x) x> instead, where
        # the rebinding makes the captured x mean 7
        captured = App(
            RebindAbs("w", None, RebindingMap((("X", None, Num(7)),)), Var("w")),
            naive_subst(
                naive_subst(parse("<x=>X | y x>"), {"y": parse("\\z.x")}),
                {"x": Num(1)},
            ),
        )
        mutated, _ = evaluate(captured)
        assert mutated == Value(Num(7))
