"""Syntax-directed type synthesis with subtyping at applications.

Synthesis returns the minimal type; there is no general subsumption rule.
Subtyping enters only at applications, where the argument type may be a
subtype of the parameter type.  Rebinding-map entries must synthesize exactly
their declared type.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

from .terms import (
    Abs,
    App,
    Error,
    Num,
    RebindAbs,
    RebindingMap,
    Sum,
    Term,
    Unbind,
    UnbindingMap,
    Var,
)
from .types import (
    INT,
    Arrow,
    IntType,
    NameContext,
    Type,
    UnboundTy,
    canonical,
    canonical_ctx,
    subtype,
    type_eq,
    wf_name_ctx,
)

TypingContext = Mapping[str, Type]


class TypeErrorKind(str, enum.Enum):
    UNBOUND_VARIABLE = "UnboundVariable"
    SUM_NON_INT = "SumNonInt"
    APPLY_NON_FUNCTION = "ApplyNonFunction"
    ARG_NOT_SUBTYPE = "ArgNotSubtype"
    ILL_FORMED_NAME_CONTEXT = "IllFormedNameContext"
    REBIND_ANNOTATION_MISMATCH = "RebindAnnotationMismatch"
    REBIND_ENTRY_TYPE_MISMATCH = "RebindEntryTypeMismatch"
    UNBIND_DECORATION_CLASH = "UnbindDecorationClash"

    def __str__(self) -> str:
        return self.value


class TypeCheckError(Exception):
    def __init__(
        self,
        kind: TypeErrorKind,
        path: tuple[str, ...],
        details: tuple[Type, ...] = (),
    ):
        self.kind = kind
        self.path = path
        self.details = details
        where = "/".join(path) or "<root>"
        msg = f"{kind.value} at {where}"
        if details:
            from .surface import print_type

            msg += ": " + ", ".join(print_type(t) for t in details)
        super().__init__(msg)


def nenv(m: UnbindingMap | RebindingMap) -> NameContext:
    """Name context extracted from a map's decorations."""
    if isinstance(m, UnbindingMap):
        entries = tuple((n, _require(ty)) for _, ty, n in m.entries)
    else:
        entries = tuple((n, _require(ty)) for n, ty, _ in m.entries)
    return NameContext(entries)


def xenv(m: UnbindingMap) -> dict[str, Type]:
    """Typing context over the unbinders of an unbinding map."""
    if not wf_name_ctx(nenv(m)):
        raise TypeCheckError(TypeErrorKind.UNBIND_DECORATION_CLASH, ())
    return {v: _require(ty) for v, ty, _ in m.entries}


def ctx_update(gamma: TypingContext, delta: TypingContext) -> dict[str, Type]:
    out = dict(gamma)
    out.update(delta)
    return out


def _require(ty: Type | None) -> Type:
    if ty is None:
        raise ValueError("typed operation on an unannotated map entry")
    return ty


def synthesize(gamma: TypingContext, t: Term) -> Type:
    """Synthesize the type of a fully annotated term, or raise TypeCheckError."""
    return _synth(gamma, t, ())


def _synth(gamma: TypingContext, t: Term, path: tuple[str, ...]) -> Type:
    match t:
        case Num():
            return INT
        case Var(x):
            if x not in gamma:
                raise TypeCheckError(TypeErrorKind.UNBOUND_VARIABLE, path)
            return gamma[x]
        case Sum(l, r):
            tl = _synth(gamma, l, path + ("left",))
            if not isinstance(canonical(tl), IntType):
                raise TypeCheckError(TypeErrorKind.SUM_NON_INT, path + ("left",), (tl,))
            tr = _synth(gamma, r, path + ("right",))
            if not isinstance(canonical(tr), IntType):
                raise TypeCheckError(TypeErrorKind.SUM_NON_INT, path + ("right",), (tr,))
            return INT
        case Abs(x, annot, body):
            param = _require(annot)
            result = _synth(ctx_update(gamma, {x: param}), body, path + ("body",))
            return Arrow(param, result)
        case App(f, a):
            tf = canonical(_synth(gamma, f, path + ("fun",)))
            if not isinstance(tf, Arrow):
                raise TypeCheckError(
                    TypeErrorKind.APPLY_NON_FUNCTION, path + ("fun",), (tf,)
                )
            ta = _synth(gamma, a, path + ("arg",))
            if not subtype(ta, tf.param):
                raise TypeCheckError(
                    TypeErrorKind.ARG_NOT_SUBTYPE, path + ("arg",), (ta, tf.param)
                )
            return tf.result
        case Unbind(umap, body):
            delta = nenv(umap)
            if not wf_name_ctx(delta):
                raise TypeCheckError(TypeErrorKind.ILL_FORMED_NAME_CONTEXT, path)
            inner = ctx_update(gamma, {v: _require(ty) for v, ty, _ in umap.entries})
            tb = _synth(inner, body, path + ("body",))
            return UnboundTy(canonical_ctx(delta), tb)
        case RebindAbs(x, annot, rmap, body):
            param = canonical(_require(annot))
            delta = nenv(rmap)
            if not wf_name_ctx(delta):
                raise TypeCheckError(TypeErrorKind.ILL_FORMED_NAME_CONTEXT, path)
            if not isinstance(param, UnboundTy) or param.ctx != canonical_ctx(delta):
                raise TypeCheckError(
                    TypeErrorKind.REBIND_ANNOTATION_MISMATCH, path, (param,)
                )
            for i, (_, ty, s) in enumerate(rmap.entries):
                declared = _require(ty)
                ts = _synth(gamma, s, path + (f"map[{i}]",))
                if not type_eq(ts, declared):
                    raise TypeCheckError(
                        TypeErrorKind.REBIND_ENTRY_TYPE_MISMATCH,
                        path + (f"map[{i}]",),
                        (ts, declared),
                    )
            result = _synth(
                ctx_update(gamma, {x: param.body}), body, path + ("body",)
            )
            return Arrow(param, result)
        case Error():
            raise ValueError("`error` has no type; typed terms cannot contain it")
    raise TypeError(f"not a term: {t!r}")
