import pytest
from hypothesis import given, settings

from strategies import untyped_terms
from ulc.metatheory import GenConfig, gen_term
from ulc.surface import (
    ParseError,
    has_annotations,
    parse,
    parse_program,
    parse_type,
    print_term,
    print_type,
)
from ulc.terms import App, Num, RebindAbs, Var, structural_eq
from ulc.types import INT, Arrow, NameContext, UnboundTy


class TestParsing:
    def test_numbers(self):
        assert parse("3") == Num(3)
        assert parse("-7") == Num(-7)

    def test_application_is_left_associative(self):
        assert structural_eq(parse("f a b"), App(App(Var("f"), Var("a")), Var("b")))

    def test_sum_binds_looser_than_application(self):
        assert structural_eq(parse("f a + 1"), parse("(f a) + 1"))

    def test_lambda_body_extends_right(self):
        assert structural_eq(parse("\\x.x + 1"), parse("\\x.(x+1)"))

    def test_unbound_term(self):
        t = parse("<x=>X, y=>Y | x+y>")
        assert t.umap.domain() == {"x", "y"}
        assert t.umap.names() == {"X", "Y"}

    def test_empty_maps(self):
        assert parse("<| 1>").umap.entries == ()
        assert parse("\\z[].z").rmap.entries == ()

    def test_comments_and_whitespace(self):
        assert parse("1 -- one\n + 2") == parse("1+2")

    def test_postfix_rebind_sugar(self):
        t = parse("x[X=>1]")
        assert isinstance(t, App) and isinstance(t.fun, RebindAbs)
        assert structural_eq(t.arg, Var("x"))
        assert structural_eq(t.fun.body, Var(t.fun.var))

    def test_sugar_avoids_capturing_map_terms(self):
        t = parse("x[X=>z]")
        assert t.fun.var != "z"

    def test_annotations(self):
        t = parse("\\x:int->int.x 1")
        assert t.annot == Arrow(INT, INT)

    def test_renamed_variable_spellings_parse(self):
        assert parse("x#1") == Var("x#1")


class TestParseTypes:
    def test_arrow_is_right_associative(self):
        assert parse_type("int->int->int") == Arrow(INT, Arrow(INT, INT))

    def test_arrow_params_need_parens(self):
        assert parse_type("(int->int)->int") == Arrow(Arrow(INT, INT), INT)

    def test_unbound_type(self):
        assert parse_type("[X:int, Y:int->int]int") == UnboundTy(
            NameContext((("X", INT), ("Y", Arrow(INT, INT)))), INT
        )

    def test_empty_context(self):
        assert parse_type("[]int") == UnboundTy(NameContext(()), INT)


class TestParseErrors:
    @pytest.mark.parametrize(
        "src",
        [
            "",
            "1 +",
            "\\x",
            "\\X.x",  # binder must be a variable
            "<x=>y | x>",  # target must be a name
            "(1",
            "x[X=>1",
            "\\x:.x",
        ],
    )
    def test_rejected(self, src):
        with pytest.raises(ParseError):
            parse(src)

    def test_positions_are_reported(self):
        with pytest.raises(ParseError) as exc:
            parse("1 +\n+ 2")
        assert exc.value.line == 2 and exc.value.col == 1


class TestModes:
    def test_untyped_inferred(self):
        _, mode = parse_program("\\x.x")
        assert mode == "untyped"

    def test_typed_inferred(self):
        _, mode = parse_program("\\x:int.x")
        assert mode == "typed"

    def test_mixed_annotations_rejected(self):
        with pytest.raises(ParseError):
            parse_program("(\\x:int.x) (\\y.y)")

    def test_error_keyword_rejected_in_typed_mode(self):
        with pytest.raises(ParseError):
            parse_program("(\\x.x) error", mode_hint="typed")

    def test_mode_hint_overrides_inference(self):
        _, mode = parse_program("\\x.x", mode_hint="untyped")
        assert mode == "untyped"

    def test_has_annotations(self):
        assert not has_annotations(parse("\\x.x"))
        assert has_annotations(parse("\\x:int.x"))
        assert has_annotations(parse("<x:int=>X | x>"))


class TestPrinting:
    @pytest.mark.parametrize(
        "src,expect",
        [
            ("1+2", "1+2"),
            ("(1+2)+3", "1+2+3"),
            ("1+(2+3)", "1+(2+3)"),
            ("(\\x.x) 1", "(\\x.x) 1"),
            ("f (g x)", "f (g x)"),
            ("(3 2)+4", "3 2+4"),  # application binds tighter than +
            ("\\x.x+1", "\\x.x+1"),
            ("<x=>X | x>", "<x=>X | x>"),
            ("(\\z[X=>1, Y=>2].z) <x=>X | x>", "(\\z[X=>1, Y=>2].z) <x=>X | x>"),
        ],
    )
    def test_minimal_parentheses(self, src, expect):
        assert print_term(parse(src)) == expect

    @pytest.mark.parametrize(
        "src,expect",
        [
            ("int", "int"),
            ("int->int->int", "int->int->int"),
            ("(int->int)->int", "(int->int)->int"),
            ("[Y1:int, Y2:int->int]int", "[Y1:int, Y2:int->int]int"),
            ("[Y2:int, Y1:int, Y1:int]int", "[Y1:int, Y2:int]int"),  # canonicalized
            ("[]int->int", "[]int->int"),
        ],
    )
    def test_types(self, src, expect):
        assert print_type(parse_type(src)) == expect


@given(untyped_terms())
@settings(max_examples=400, deadline=None)
def test_parse_print_roundtrip(t):
    assert structural_eq(parse(print_term(t)), t)


def test_roundtrip_on_generated_typed_terms():
    gen = gen_term(GenConfig(seed=3, mode="typed"))
    for _ in range(300):
        t = next(gen)
        reparsed, mode = parse_program(print_term(t), mode_hint="typed")
        assert mode == "typed"
        assert structural_eq(reparsed, t)
