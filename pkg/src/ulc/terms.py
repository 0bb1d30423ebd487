"""Abstract syntax shared by the plain and annotated calculi.

Variables and names live in disjoint namespaces: variables (lowercase in the
surface syntax) can be alpha-renamed, names (uppercase) never are.  Unbinding
and rebinding maps keep their written entry order but behave as finite maps:
duplicate keys are rejected at construction and comparisons are
order-insensitive.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Literal, Optional

from .types import Type, type_eq

Mode = Literal["untyped", "typed"]


@dataclass(frozen=True)
class Term:
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Num(Term):
    value: int


@dataclass(frozen=True)
class Sum(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Abs(Term):
    var: str
    annot: Optional[Type]
    body: Term


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True)
class UnbindingMap:
    """Finite map variable -> name, optionally decorated with types."""

    entries: tuple[tuple[str, Optional[Type], str], ...] = ()

    def __post_init__(self) -> None:
        vs = [v for v, _, _ in self.entries]
        if len(vs) != len(set(vs)):
            raise ValueError(f"duplicate variable in unbinding map: {vs}")

    def domain(self) -> frozenset[str]:
        return frozenset(v for v, _, _ in self.entries)

    def names(self) -> frozenset[str]:
        return frozenset(n for _, _, n in self.entries)

    def name_of(self, var: str) -> str:
        for v, _, n in self.entries:
            if v == var:
                return n
        raise KeyError(var)


@dataclass(frozen=True)
class RebindingMap:
    """Finite map name -> term, optionally decorated with types."""

    entries: tuple[tuple[str, Optional[Type], Term], ...] = ()

    def __post_init__(self) -> None:
        ns = [n for n, _, _ in self.entries]
        if len(ns) != len(set(ns)):
            raise ValueError(f"duplicate name in rebinding map: {ns}")

    def domain(self) -> frozenset[str]:
        return frozenset(n for n, _, _ in self.entries)

    def term_of(self, name: str) -> Term:
        for n, _, t in self.entries:
            if n == name:
                return t
        raise KeyError(name)

    def terms(self) -> tuple[Term, ...]:
        return tuple(t for _, _, t in self.entries)


@dataclass(frozen=True)
class Unbind(Term):
    umap: UnbindingMap
    body: Term


@dataclass(frozen=True)
class RebindAbs(Term):
    var: str
    annot: Optional[Type]
    rmap: RebindingMap
    body: Term


@dataclass(frozen=True)
class Error(Term):
    pass


ERROR = Error()


def is_value(t: Term) -> bool:
    """Numerals, both kinds of abstraction, and unbound terms whose body is
    closed by the unbinding map."""
    from .binding import free_vars  # local import: binding depends on terms

    match t:
        case Num() | Abs() | RebindAbs():
            return True
        case Unbind(umap, body):
            return free_vars(body) <= umap.domain()
    return False


@dataclass(frozen=True)
class ModeViolation:
    kind: Literal["MixedAnnotation", "ErrorTermInTypedMode"]
    path: tuple[str, ...]

    def __str__(self) -> str:
        where = "/".join(self.path) or "<root>"
        return f"{self.kind} at {where}"


def check_mode(t: Term, mode: Mode) -> Optional[ModeViolation]:
    """Annotations are all-or-nothing; `error` belongs to the untyped calculus
    only.  Returns the first violation in preorder, or None."""
    want = mode == "typed"

    def bad(present: bool, path: tuple[str, ...]) -> Optional[ModeViolation]:
        if present != want:
            return ModeViolation("MixedAnnotation", path)
        return None

    def walk(t: Term, path: tuple[str, ...]) -> Optional[ModeViolation]:
        match t:
            case Var() | Num():
                return None
            case Error():
                if want:
                    return ModeViolation("ErrorTermInTypedMode", path)
                return None
            case Sum(left, right):
                return walk(left, path + ("left",)) or walk(right, path + ("right",))
            case App(fun, arg):
                return walk(fun, path + ("fun",)) or walk(arg, path + ("arg",))
            case Abs(_, annot, body):
                return bad(annot is not None, path) or walk(body, path + ("body",))
            case Unbind(umap, body):
                for i, (_, ty, _) in enumerate(umap.entries):
                    v = bad(ty is not None, path + (f"map[{i}]",))
                    if v:
                        return v
                return walk(body, path + ("body",))
            case RebindAbs(_, annot, rmap, body):
                v = bad(annot is not None, path)
                if v:
                    return v
                for i, (_, ty, sub) in enumerate(rmap.entries):
                    v = bad(ty is not None, path + (f"map[{i}]",)) or walk(
                        sub, path + (f"map[{i}]",)
                    )
                    if v:
                        return v
                return walk(body, path + ("body",))
        raise TypeError(f"not a term: {t!r}")

    return walk(t, ())


def _annot_eq(a: Optional[Type], b: Optional[Type]) -> bool:
    if a is None or b is None:
        return a is b
    return type_eq(a, b)


def structural_eq(t1: Term, t2: Term) -> bool:
    """Syntactic equality: binder spellings matter, map entry order does not,
    type annotations compare modulo name-context canonicalization."""
    match t1, t2:
        case Var(a), Var(b):
            return a == b
        case Num(a), Num(b):
            return a == b
        case Error(), Error():
            return True
        case Sum(l1, r1), Sum(l2, r2):
            return structural_eq(l1, l2) and structural_eq(r1, r2)
        case App(f1, a1), App(f2, a2):
            return structural_eq(f1, f2) and structural_eq(a1, a2)
        case Abs(x1, an1, b1), Abs(x2, an2, b2):
            return x1 == x2 and _annot_eq(an1, an2) and structural_eq(b1, b2)
        case Unbind(m1, b1), Unbind(m2, b2):
            if m1.domain() != m2.domain():
                return False
            for v, ty, n in m1.entries:
                for v2, ty2, n2 in m2.entries:
                    if v == v2 and (n != n2 or not _annot_eq(ty, ty2)):
                        return False
            return structural_eq(b1, b2)
        case RebindAbs(x1, an1, m1, b1), RebindAbs(x2, an2, m2, b2):
            if x1 != x2 or not _annot_eq(an1, an2):
                return False
            if m1.domain() != m2.domain():
                return False
            for n, ty, s in m1.entries:
                ty2 = next(t for n2, t, _ in m2.entries if n2 == n)
                s2 = m2.term_of(n)
                if not _annot_eq(ty, ty2) or not structural_eq(s, s2):
                    return False
            return structural_eq(b1, b2)
    return False


def subterms(t: Term) -> Iterator[Term]:
    """Preorder traversal, including rebinding-map range terms."""
    yield t
    match t:
        case Sum(left, right):
            yield from subterms(left)
            yield from subterms(right)
        case App(fun, arg):
            yield from subterms(fun)
            yield from subterms(arg)
        case Abs(_, _, body) | Unbind(_, body):
            yield from subterms(body)
        case RebindAbs(_, _, rmap, body):
            for sub in rmap.terms():
                yield from subterms(sub)
            yield from subterms(body)
