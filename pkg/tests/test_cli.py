import json

import pytest

from ulc.cli import main


@pytest.fixture
def write(tmp_path):
    def go(src, name="prog.ulc"):
        p = tmp_path / name
        p.write_text(src)
        return str(p)

    return go


class TestEval:
    def test_value(self, write, capsys):
        assert main(["eval", write("1+2")]) == 0
        assert capsys.readouterr().out.strip() == "value: 3"

    def test_dynamic_error(self, write, capsys):
        assert main(["eval", write("(\\z[X=>1].z) <x=>X, y=>Y | x+y>")]) == 1
        assert capsys.readouterr().out.strip() == "error"

    def test_stuck(self, write, capsys):
        assert main(["eval", write("1 2")]) == 2
        assert capsys.readouterr().out.startswith("stuck: ApplyNonFunction")

    def test_parse_error(self, write, capsys):
        assert main(["eval", write("1 +")]) == 4
        assert "parse error" in capsys.readouterr().err

    def test_fuel_exhausted(self, write, capsys):
        assert main(["eval", "--fuel", "10", write("(\\x.x x) (\\x.x x)")]) == 5

    def test_fuel_from_environment(self, write, monkeypatch):
        monkeypatch.setenv("ULC_FUEL", "10")
        # the parser is built at invocation time, so the env var applies
        assert main(["eval", write("(\\x.x x) (\\x.x x)")]) == 5

    def test_missing_file(self, tmp_path):
        assert main(["eval", str(tmp_path / "nope.ulc")]) == 64

    def test_usage_error(self):
        assert main(["no-such-command"]) == 64

    def test_typed_program_evaluates_with_typed_rules(self, write, capsys):
        assert main(["eval", write("(\\x:int.x+1) 2")]) == 0
        assert capsys.readouterr().out.strip() == "value: 3"

    def test_mode_flags_are_validated(self, write, capsys):
        # forcing untyped mode on an annotated program is a parse-level reject
        assert main(["eval", "--untyped", write("(\\x:int.x) 1")]) == 4


class TestTrace:
    def test_text(self, write, capsys):
        assert main(["trace", write("1+2")]) == 0
        out = capsys.readouterr().out
        assert "--Sum-->" in out and out.strip().endswith("value: 3")

    def test_json_schema(self, write, capsys):
        assert main(["trace", "--format", "json", write("(\\x.x+1) 2")]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["outcome"] == {"kind": "value", "term": "3"}
        assert doc["steps"][0] == {"from": "(\\x.x+1) 2", "rule": "App", "to": "2+1"}

    def test_json_error_outcome(self, write, capsys):
        assert main(
            ["trace", "--format", "json", write("(\\z[].z) <x=>X | x>")]
        ) == 1
        doc = json.loads(capsys.readouterr().out)
        assert doc["outcome"] == {"kind": "error"}
        assert doc["steps"][-1]["rule"] == "AppRebindERR"

    def test_json_stuck_outcome(self, write, capsys):
        assert main(["trace", "--format", "json", write("1 2")]) == 2
        doc = json.loads(capsys.readouterr().out)
        assert doc["outcome"]["kind"] == "stuck"
        assert doc["outcome"]["reason"] == "ApplyNonFunction"


class TestTypecheck:
    def test_reports_the_type(self, write, capsys):
        assert main(["typecheck", write("\\x:int.x")]) == 0
        assert capsys.readouterr().out.strip() == "int->int"

    def test_type_error(self, write, capsys):
        assert main(["typecheck", write("(\\x:int.x) (\\y:int.y)")]) == 3
        assert "ArgNotSubtype" in capsys.readouterr().out

    def test_requires_typed_mode(self, write, capsys):
        assert main(["typecheck", write("\\x.x")]) == 64

    def test_rejected_example_from_the_corpus(self, write, capsys):
        src = "(\\x:[Y:int]int [Y:int=>3].x+4) <y:int->int=>Y | y 2>"
        assert main(["typecheck", write(src)]) == 3


class TestVerifyAndCorpus:
    def test_verify_small(self, capsys):
        assert main(["verify", "--cases", "30", "--depth", "3"]) == 0
        out = capsys.readouterr().out
        for prop in (
            "preservation",
            "progress",
            "canonical-forms",
            "erasure-simulation",
            "free-vars-lemma",
        ):
            assert f"{prop}: ok" in out

    def test_verify_json(self, capsys):
        assert main(["verify", "--cases", "5", "--depth", "3", "--format", "json"]) == 0
        out = capsys.readouterr().out
        start = out.index("[")
        doc = json.loads(out[start:])
        assert len(doc) == 5 and all(r["failures"] == [] for r in doc)

    def test_corpus_all_pass(self, capsys):
        assert main(["corpus"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out
        assert out.count("PASS") == 12
