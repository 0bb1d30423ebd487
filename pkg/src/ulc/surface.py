r"""Concrete syntax for terms and types.

    term    ::= sum
    sum     ::= app ('+' app)*                        left-assoc
    app     ::= postfix postfix*                      left-assoc
    postfix ::= atom ('[' rebinds ']')*               t[s] sugar
    atom    ::= integer | variable | 'error' | '(' term ')' | lambda | unbound
    lambda  ::= '\' variable (':' type)? ('[' rebinds ']')? '.' term
    unbound ::= '<' unbinds '|' term '>'
    unbinds ::= (variable (':' type)? '=>' name (',' ...)*)?
    rebinds ::= (name (':' type)? '=>' term (',' ...)*)?
    type    ::= tatom ('->' type)?                    right-assoc
    tatom   ::= 'int' | '(' type ')' | '[' namectx ']' tatom
    namectx ::= (name ':' type (',' ...)*)?

Variables start lowercase, names uppercase.  '=>' is the map arrow, '->' the
type arrow.  Line comments start with '--'.  The postfix sugar `t[s]` stands
for `(\z[s].z) t` with z fresh for s.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .binding import FreshSupply, fv_map
from .terms import (
    ERROR,
    Abs,
    App,
    Error,
    Mode,
    Num,
    RebindAbs,
    RebindingMap,
    Sum,
    Term,
    Unbind,
    UnbindingMap,
    Var,
    check_mode,
)
from .types import INT, Arrow, IntType, NameContext, Type, UnboundTy, canonical_ctx


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.col = col
        self.expected = expected
        suffix = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{line}:{col}: {message}{suffix}")


@dataclass(frozen=True)
class Token:
    kind: str  # INT VAR NAME ERROR INTTY PUNCT EOF
    text: str
    line: int
    col: int


_PUNCT = ("=>", "->", "+", "(", ")", "\\", ".", ":", ",", "|", "<", ">", "[", "]")


def _lex(src: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if src.startswith("--", i):
            while i < n and src[i] != "\n":
                i += 1
            continue
        if c.isdigit() or (c == "-" and i + 1 < n and src[i + 1].isdigit()):
            j = i + 1
            while j < n and src[j].isdigit():
                j += 1
            toks.append(Token("INT", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] in "_#"):
                j += 1
            word = src[i:j]
            if word == "error":
                kind = "ERROR"
            elif word == "int":
                kind = "INTTY"
            elif word[0].isupper():
                kind = "NAME"
            else:
                kind = "VAR"
            toks.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        matched = None
        for p in _PUNCT:
            if src.startswith(p, i):
                matched = p
                break
        if matched is None:
            raise ParseError(f"unexpected character {c!r}", line, col)
        toks.append(Token("PUNCT", matched, line, col))
        i += len(matched)
        col += len(matched)
    toks.append(Token("EOF", "", line, col))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = _lex(src)
        self.pos = 0
        self.supply = FreshSupply()

    def peek(self) -> Token:
        return self.toks[self.pos]

    def at(self, text: str) -> bool:
        t = self.peek()
        return (t.kind == "PUNCT" and t.text == text) or t.kind == text

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            t = self.peek()
            raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.line, t.col, (text,))
        return self.next()

    def fail(self, *expected: str):
        t = self.peek()
        raise ParseError(
            f"unexpected {t.text or 'end of input'!r}", t.line, t.col, expected
        )

    # terms

    def term(self) -> Term:
        t = self.app()
        while self.at("+"):
            self.next()
            t = Sum(t, self.app())
        return t

    def app(self) -> Term:
        t = self.postfix()
        while self.peek().kind in ("INT", "VAR", "NAME", "ERROR") or self.at("(") or self.at("\\") or self.at("<"):
            if self.peek().kind == "NAME":
                self.fail("a term")
            t = App(t, self.postfix())
        return t

    def postfix(self) -> Term:
        t = self.atom()
        while self.at("["):
            self.next()
            rmap = self.rebinds()
            self.expect("]")
            z = "z" if "z" not in fv_map(rmap) else FreshSupply().fresh("z", fv_map(rmap))
            t = App(RebindAbs(z, None, rmap, Var(z)), t)
        return t

    def atom(self) -> Term:
        t = self.peek()
        if t.kind == "INT":
            self.next()
            return Num(int(t.text))
        if t.kind == "VAR":
            self.next()
            return Var(t.text)
        if t.kind == "ERROR":
            self.next()
            return ERROR
        if self.at("("):
            self.next()
            inner = self.term()
            self.expect(")")
            return inner
        if self.at("\\"):
            return self.lam()
        if self.at("<"):
            return self.unbound()
        self.fail("a term")

    def lam(self) -> Term:
        self.expect("\\")
        var = self.expect("VAR").text
        annot = None
        if self.at(":"):
            self.next()
            annot = self.type()
        rmap = None
        if self.at("["):
            self.next()
            rmap = self.rebinds()
            self.expect("]")
        self.expect(".")
        body = self.term()
        if rmap is not None:
            return RebindAbs(var, annot, rmap, body)
        return Abs(var, annot, body)

    def unbound(self) -> Term:
        self.expect("<")
        entries = []
        if not self.at("|"):
            while True:
                var = self.expect("VAR").text
                ty = None
                if self.at(":"):
                    self.next()
                    ty = self.type()
                self.expect("=>")
                name = self.expect("NAME").text
                entries.append((var, ty, name))
                if not self.at(","):
                    break
                self.next()
        self.expect("|")
        body = self.term()
        self.expect(">")
        try:
            umap = UnbindingMap(tuple(entries))
        except ValueError as exc:
            t = self.peek()
            raise ParseError(str(exc), t.line, t.col) from exc
        return Unbind(umap, body)

    def rebinds(self) -> RebindingMap:
        entries = []
        if not self.at("]"):
            while True:
                name = self.expect("NAME").text
                ty = None
                if self.at(":"):
                    self.next()
                    ty = self.type()
                self.expect("=>")
                entries.append((name, ty, self.term()))
                if not self.at(","):
                    break
                self.next()
        try:
            return RebindingMap(tuple(entries))
        except ValueError as exc:
            t = self.peek()
            raise ParseError(str(exc), t.line, t.col) from exc

    # types

    def type(self) -> Type:
        t = self.tatom()
        if self.at("->"):
            self.next()
            return Arrow(t, self.type())
        return t

    def tatom(self) -> Type:
        if self.at("INTTY"):
            self.next()
            return INT
        if self.at("("):
            self.next()
            inner = self.type()
            self.expect(")")
            return inner
        if self.at("["):
            self.next()
            entries = []
            if not self.at("]"):
                while True:
                    name = self.expect("NAME").text
                    self.expect(":")
                    entries.append((name, self.type()))
                    if not self.at(","):
                        break
                    self.next()
            self.expect("]")
            return UnboundTy(NameContext(tuple(entries)), self.tatom())
        self.fail("a type")


def parse(src: str) -> Term:
    p = _Parser(src)
    t = p.term()
    p.expect("EOF")
    return t


def parse_type(src: str) -> Type:
    p = _Parser(src)
    t = p.type()
    p.expect("EOF")
    return t


def has_annotations(t: Term) -> bool:
    match t:
        case Var() | Num() | Error():
            return False
        case Sum(l, r):
            return has_annotations(l) or has_annotations(r)
        case App(f, a):
            return has_annotations(f) or has_annotations(a)
        case Abs(_, annot, body):
            return annot is not None or has_annotations(body)
        case Unbind(umap, body):
            return any(ty is not None for _, ty, _ in umap.entries) or has_annotations(body)
        case RebindAbs(_, annot, rmap, body):
            return (
                annot is not None
                or any(ty is not None for _, ty, _ in rmap.entries)
                or any(has_annotations(s) for s in rmap.terms())
                or has_annotations(body)
            )
    raise TypeError(f"not a term: {t!r}")


def parse_program(src: str, mode_hint: Optional[Mode] = None) -> tuple[Term, Mode]:
    """Parse and infer the mode (typed iff any annotation appears), then
    validate coherence with check_mode."""
    t = parse(src)
    mode: Mode = mode_hint or ("typed" if has_annotations(t) else "untyped")
    violation = check_mode(t, mode)
    if violation is not None:
        raise ParseError(f"incoherent {mode} term: {violation}", 1, 1)
    return t, mode


# -- printing ---------------------------------------------------------------

_ATOM, _APP, _SUM, _LOW = 3, 2, 1, 0


def print_term(t: Term) -> str:
    return _render(t, _LOW)


def _prec(t: Term) -> int:
    match t:
        case Var() | Num() | Error() | Unbind():
            return _ATOM
        case App():
            return _APP
        case Sum():
            return _SUM
    return _LOW  # Abs / RebindAbs


def _render(t: Term, level: int) -> str:
    s = _render_raw(t)
    if _prec(t) < level:
        return f"({s})"
    return s


def _render_raw(t: Term) -> str:
    match t:
        case Var(x):
            return x
        case Num(n):
            return str(n)
        case Error():
            return "error"
        case Sum(l, r):
            return f"{_render(l, _SUM)}+{_render(r, _APP)}"
        case App(f, a):
            return f"{_render(f, _APP)} {_render(a, _ATOM)}"
        case Abs(x, annot, body):
            ann = f":{print_type(annot)}" if annot is not None else ""
            return f"\\{x}{ann}.{_render(body, _LOW)}"
        case RebindAbs(x, annot, rmap, body):
            ann = f":{print_type(annot)} " if annot is not None else ""
            return f"\\{x}{ann}[{_render_rebinds(rmap)}].{_render(body, _LOW)}"
        case Unbind(umap, body):
            ub = ", ".join(
                f"{v}{':' + print_type(ty) if ty is not None else ''}=>{n}"
                for v, ty, n in umap.entries
            )
            return f"<{ub} | {_render(body, _LOW)}>"
    raise TypeError(f"not a term: {t!r}")


def _render_rebinds(rmap: RebindingMap) -> str:
    return ", ".join(
        f"{n}{':' + print_type(ty) if ty is not None else ''}=>{_render(s, _LOW)}"
        for n, ty, s in rmap.entries
    )


def print_type(ty: Type) -> str:
    match ty:
        case IntType():
            return "int"
        case Arrow(param, result):
            left = print_type(param)
            if isinstance(param, Arrow):
                left = f"({left})"
            return f"{left}->{print_type(result)}"
        case UnboundTy(ctx, body):
            inner = print_type(body)
            if isinstance(body, Arrow):
                inner = f"({inner})"
            entries = ", ".join(
                f"{n}:{print_type(t)}" for n, t in canonical_ctx(ctx).entries
            )
            return f"[{entries}]{inner}"
    raise TypeError(f"not a type: {ty!r}")
