"""Lambda calculus with unbind/rebind: positional and nominal binding in one
small language, with a dynamic-check evaluator, a subtyping type system, and
executable soundness checks."""

from .binding import (
    FreshSupply,
    SubstUndefined,
    alpha_equiv,
    free_vars,
    rename_binders,
    subst,
    subst_raw,
)
from .semantics import (
    AlreadyValue,
    DynamicError,
    ErrorResult,
    EvalOutcome,
    FuelExhausted,
    Reduced,
    Rule,
    StepResult,
    Stuck,
    StuckOutcome,
    Trace,
    Value,
    erase,
    evaluate,
    evaluate_typed,
    step,
    step_typed,
)
from .surface import ParseError, parse, parse_program, parse_type, print_term, print_type
from .terms import (
    ERROR,
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
    check_mode,
    is_value,
    structural_eq,
)
from .typecheck import TypeCheckError, ctx_update, nenv, synthesize, xenv
from .types import (
    INT,
    Arrow,
    IntType,
    NameContext,
    Type,
    UnboundTy,
    canonical,
    subtype,
    subtype_ctx,
    type_eq,
    wf_name_ctx,
)

__all__ = [name for name in dir() if not name.startswith("_")]
