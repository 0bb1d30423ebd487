"""Types of the annotated calculus: int, arrows, and unbound types [Delta]T.

Name contexts are compared modulo permutation and repetition, so every
comparison goes through a canonical form (sorted by name, duplicates
dropped).
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Type:
    pass


@dataclass(frozen=True)
class IntType(Type):
    def __repr__(self) -> str:
        return "IntType()"


INT = IntType()


@dataclass(frozen=True)
class Arrow(Type):
    param: Type
    result: Type


@dataclass(frozen=True)
class NameContext:
    """Finite type assignment to names, as written: order and repetitions kept."""

    entries: tuple[tuple[str, Type], ...] = ()

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.entries)


@dataclass(frozen=True)
class UnboundTy(Type):
    ctx: NameContext
    body: Type


def canonical_ctx(ctx: NameContext) -> NameContext:
    """Sort by name and drop repeated names (first occurrence wins)."""
    seen: dict[str, Type] = {}
    for name, ty in ctx.entries:
        if name not in seen:
            seen[name] = canonical(ty)
    return NameContext(tuple(sorted(seen.items())))


def canonical(ty: Type) -> Type:
    match ty:
        case IntType():
            return INT
        case Arrow(param, result):
            return Arrow(canonical(param), canonical(result))
        case UnboundTy(ctx, body):
            return UnboundTy(canonical_ctx(ctx), canonical(body))
    raise TypeError(f"not a type: {ty!r}")


def type_eq(t1: Type, t2: Type) -> bool:
    return canonical(t1) == canonical(t2)


def wf_name_ctx(ctx: NameContext) -> bool:
    """Repeated names must carry equal types; embedded contexts must be
    well-formed too."""
    seen: dict[str, Type] = {}
    for name, ty in ctx.entries:
        if not _wf_type(ty):
            return False
        c = canonical(ty)
        if name in seen and seen[name] != c:
            return False
        seen[name] = c
    return True


def _wf_type(ty: Type) -> bool:
    match ty:
        case IntType():
            return True
        case Arrow(param, result):
            return _wf_type(param) and _wf_type(result)
        case UnboundTy(ctx, body):
            return wf_name_ctx(ctx) and _wf_type(body)
    return False


def subtype(t1: Type, t2: Type) -> bool:
    """Algorithmic subtyping: int/arrow as usual, unbound types contravariant
    in the name context."""
    a, b = canonical(t1), canonical(t2)
    match a, b:
        case IntType(), IntType():
            return True
        case Arrow(p1, r1), Arrow(p2, r2):
            return subtype(p2, p1) and subtype(r1, r2)
        case UnboundTy(c1, b1), UnboundTy(c2, b2):
            return subtype_ctx(c2, c1) and subtype(b1, b2)
    return False


def subtype_ctx(ctx1: NameContext, ctx2: NameContext) -> bool:
    """Width and depth subtyping on name contexts: ctx1 provides at least the
    names of ctx2, at subtypes of the required types."""
    have = dict(canonical_ctx(ctx1).entries)
    for name, ty in canonical_ctx(ctx2).entries:
        if name not in have or not subtype(have[name], ty):
            return False
    return True
