"""Free variables, substitution, and alpha-equivalence.

`subst_raw` is the literal partial substitution: it fails whenever a binder or
an unbinder clashes with the free variables of the substitution.  `subst` is
the total version, renaming clashing binders on demand with deterministic
`x#1`, `x#2`, ... spellings.  Only variables are ever renamed; names are a
fixed nominal interface.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Optional

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
from .types import type_eq

Subst = Mapping[str, Term]


def free_vars(t: Term) -> frozenset[str]:
    match t:
        case Var(x):
            return frozenset({x})
        case Num() | Error():
            return frozenset()
        case Sum(l, r):
            return free_vars(l) | free_vars(r)
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Abs(x, _, body):
            return free_vars(body) - {x}
        case Unbind(umap, body):
            return free_vars(body) - umap.domain()
        case RebindAbs(x, _, rmap, body):
            return (free_vars(body) - {x}) | fv_map(rmap)
    raise TypeError(f"not a term: {t!r}")


def fv_map(rmap: RebindingMap) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for sub in rmap.terms():
        out |= free_vars(sub)
    return out


def fv_subst(sigma: Subst) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for term in sigma.values():
        out |= free_vars(term)
    return out


def all_vars(t: Term) -> frozenset[str]:
    """Free and bound variables, used to build avoid-sets for renaming."""
    match t:
        case Var(x):
            return frozenset({x})
        case Num() | Error():
            return frozenset()
        case Sum(l, r):
            return all_vars(l) | all_vars(r)
        case App(f, a):
            return all_vars(f) | all_vars(a)
        case Abs(x, _, body):
            return all_vars(body) | {x}
        case Unbind(umap, body):
            return all_vars(body) | umap.domain()
        case RebindAbs(x, _, rmap, body):
            out = all_vars(body) | {x}
            for sub in rmap.terms():
                out |= all_vars(sub)
            return out
    raise TypeError(f"not a term: {t!r}")


class SubstUndefined(Exception):
    """Raised by subst_raw when a capture-avoidance side condition fails."""

    def __init__(self, node: Term, var: str):
        self.node = node
        self.var = var
        super().__init__(f"substitution undefined: {var} clashes at {node!r}")


def _drop(sigma: Subst, keys: Iterable[str]) -> dict[str, Term]:
    ks = set(keys)
    return {k: v for k, v in sigma.items() if k not in ks}


def _subst_rmap_raw(rmap: RebindingMap, sigma: Subst) -> RebindingMap:
    return RebindingMap(
        tuple((n, ty, subst_raw(sub, sigma)) for n, ty, sub in rmap.entries)
    )


def subst_raw(t: Term, sigma: Subst) -> Term:
    """Partial substitution; raises SubstUndefined on a binder clash."""
    match t:
        case Var(x):
            return sigma.get(x, t)
        case Num() | Error():
            return t
        case Sum(l, r):
            return Sum(subst_raw(l, sigma), subst_raw(r, sigma))
        case App(f, a):
            return App(subst_raw(f, sigma), subst_raw(a, sigma))
        case Abs(x, annot, body):
            if x in fv_subst(sigma):
                raise SubstUndefined(t, x)
            return Abs(x, annot, subst_raw(body, _drop(sigma, {x})))
        case Unbind(umap, body):
            clash = umap.domain() & fv_subst(sigma)
            if clash:
                raise SubstUndefined(t, min(clash))
            return Unbind(umap, subst_raw(body, _drop(sigma, umap.domain())))
        case RebindAbs(x, annot, rmap, body):
            if x in fv_subst(sigma):
                raise SubstUndefined(t, x)
            return RebindAbs(
                x, annot, _subst_rmap_raw(rmap, sigma), subst_raw(body, _drop(sigma, {x}))
            )
    raise TypeError(f"not a term: {t!r}")


class FreshSupply:
    """Deterministic fresh variables: smallest k >= 1 with base#k unused."""

    @staticmethod
    def base_of(var: str) -> str:
        return var.split("#", 1)[0]

    def fresh(self, var: str, avoid: frozenset[str] | set[str]) -> str:
        base = self.base_of(var)
        k = 1
        while f"{base}#{k}" in avoid:
            k += 1
        return f"{base}#{k}"


def subst(t: Term, sigma: Subst, supply: Optional[FreshSupply] = None) -> Term:
    """Total capture-avoiding substitution.  Equal to subst_raw whenever the
    latter is defined; otherwise renames the clashing binders first."""
    if supply is None:
        supply = FreshSupply()
    if not sigma:
        return t
    match t:
        case Var() | Num() | Error():
            return subst_raw(t, sigma)
        case Sum(l, r):
            return Sum(subst(l, sigma, supply), subst(r, sigma, supply))
        case App(f, a):
            return App(subst(f, sigma, supply), subst(a, sigma, supply))
        case Abs(x, annot, body):
            if x in fv_subst(sigma):
                avoid = fv_subst(sigma) | set(sigma) | all_vars(body) | {x}
                x2 = supply.fresh(x, avoid)
                body = subst(body, {x: Var(x2)}, supply)
                x = x2
            return Abs(x, annot, subst(body, _drop(sigma, {x}), supply))
        case Unbind(umap, body):
            clash = umap.domain() & fv_subst(sigma)
            if clash:
                avoid = (
                    fv_subst(sigma) | set(sigma) | all_vars(body) | umap.domain()
                )
                ren: dict[str, Term] = {}
                entries = []
                for v, ty, n in umap.entries:
                    if v in clash:
                        v2 = supply.fresh(v, avoid)
                        avoid = avoid | {v2}
                        ren[v] = Var(v2)
                        v = v2
                    entries.append((v, ty, n))
                umap = UnbindingMap(tuple(entries))
                body = subst(body, ren, supply)
            return Unbind(umap, subst(body, _drop(sigma, umap.domain()), supply))
        case RebindAbs(x, annot, rmap, body):
            rmap = RebindingMap(
                tuple((n, ty, subst(sub, sigma, supply)) for n, ty, sub in rmap.entries)
            )
            if x in fv_subst(sigma):
                avoid = fv_subst(sigma) | set(sigma) | all_vars(body) | {x}
                x2 = supply.fresh(x, avoid)
                body = subst(body, {x: Var(x2)}, supply)
                x = x2
            return RebindAbs(x, annot, rmap, subst(body, _drop(sigma, {x}), supply))
    raise TypeError(f"not a term: {t!r}")


def rename_binders(t: Term, supply: Optional[FreshSupply] = None) -> Term:
    """Alpha-variant of t with every variable binder renamed fresh."""
    if supply is None:
        supply = FreshSupply()
    avoid = set(all_vars(t))

    def go(t: Term) -> Term:
        match t:
            case Var() | Num() | Error():
                return t
            case Sum(l, r):
                return Sum(go(l), go(r))
            case App(f, a):
                return App(go(f), go(a))
            case Abs(x, annot, body):
                x2 = supply.fresh(x, frozenset(avoid))
                avoid.add(x2)
                return Abs(x2, annot, go(subst(body, {x: Var(x2)}, supply)))
            case Unbind(umap, body):
                ren: dict[str, Term] = {}
                entries = []
                for v, ty, n in umap.entries:
                    v2 = supply.fresh(v, frozenset(avoid))
                    avoid.add(v2)
                    ren[v] = Var(v2)
                    entries.append((v2, ty, n))
                return Unbind(UnbindingMap(tuple(entries)), go(subst(body, ren, supply)))
            case RebindAbs(x, annot, rmap, body):
                rmap2 = RebindingMap(
                    tuple((n, ty, go(sub)) for n, ty, sub in rmap.entries)
                )
                x2 = supply.fresh(x, frozenset(avoid))
                avoid.add(x2)
                return RebindAbs(x2, annot, rmap2, go(subst(body, {x: Var(x2)}, supply)))
        raise TypeError(f"not a term: {t!r}")

    return go(t)


def _annot_eq(a, b) -> bool:
    if a is None or b is None:
        return a is b
    return type_eq(a, b)


def alpha_equiv(t1: Term, t2: Term) -> bool:
    """Equality up to consistent renaming of variable binders.  Names (and
    rebinding-map keys) must match exactly."""
    return _alpha(t1, t2, {}, {}, [0])


def _alpha(
    t1: Term, t2: Term, env1: dict[str, int], env2: dict[str, int], fresh: list[int]
) -> bool:
    match t1, t2:
        case Var(a), Var(b):
            ia, ib = env1.get(a), env2.get(b)
            if ia is None and ib is None:
                return a == b
            return ia == ib
        case Num(a), Num(b):
            return a == b
        case Error(), Error():
            return True
        case Sum(l1, r1), Sum(l2, r2):
            return _alpha(l1, l2, env1, env2, fresh) and _alpha(r1, r2, env1, env2, fresh)
        case App(f1, a1), App(f2, a2):
            return _alpha(f1, f2, env1, env2, fresh) and _alpha(a1, a2, env1, env2, fresh)
        case Abs(x1, an1, b1), Abs(x2, an2, b2):
            if not _annot_eq(an1, an2):
                return False
            lvl = fresh[0]
            fresh[0] += 1
            return _alpha(b1, b2, {**env1, x1: lvl}, {**env2, x2: lvl}, fresh)
        case RebindAbs(x1, an1, m1, b1), RebindAbs(x2, an2, m2, b2):
            if not _annot_eq(an1, an2) or m1.domain() != m2.domain():
                return False
            for n, ty, s in m1.entries:
                ty2 = next(t for n2, t, _ in m2.entries if n2 == n)
                if not _annot_eq(ty, ty2):
                    return False
                if not _alpha(s, m2.term_of(n), env1, env2, fresh):
                    return False
            lvl = fresh[0]
            fresh[0] += 1
            return _alpha(b1, b2, {**env1, x1: lvl}, {**env2, x2: lvl}, fresh)
        case Unbind(m1, b1), Unbind(m2, b2):
            return _alpha_unbind(m1, b1, m2, b2, env1, env2, fresh)
    return False


def _alpha_unbind(m1, b1, m2, b2, env1, env2, fresh) -> bool:
    # Unbinders are matched per name; when a name has several unbinders the
    # pairing is not determined, so search the per-name permutations.
    by_name1: dict[str, list[tuple[str, object]]] = {}
    by_name2: dict[str, list[tuple[str, object]]] = {}
    for v, ty, n in m1.entries:
        by_name1.setdefault(n, []).append((v, ty))
    for v, ty, n in m2.entries:
        by_name2.setdefault(n, []).append((v, ty))
    if set(by_name1) != set(by_name2):
        return False
    if any(len(by_name1[n]) != len(by_name2[n]) for n in by_name1):
        return False

    names = sorted(by_name1)

    def assign(i: int, pairs: list[tuple[str, str, object, object]]) -> bool:
        if i == len(names):
            e1, e2 = dict(env1), dict(env2)
            lvl = fresh[0]
            for v1, v2, ty1, ty2 in pairs:
                if not _annot_eq(ty1, ty2):
                    return False
                e1[v1] = lvl
                e2[v2] = lvl
                lvl += 1
            saved = fresh[0]
            fresh[0] = lvl
            ok = _alpha(b1, b2, e1, e2, fresh)
            fresh[0] = saved
            return ok
        n = names[i]
        g1, g2 = by_name1[n], by_name2[n]
        from itertools import permutations

        for perm in permutations(range(len(g2))):
            ext = pairs + [
                (g1[j][0], g2[perm[j]][0], g1[j][1], g2[perm[j]][1])
                for j in range(len(g1))
            ]
            if assign(i + 1, ext):
                return True
        return False

    return assign(0, [])
