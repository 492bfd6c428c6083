"""Eliminates family binders with literal finite index sets.

A family binder over the literal {c1, ..., cn} becomes n nested universal
quantifiers over fresh set variables (one per element, named by position
in canonical order), and each bounded index quantifier becomes the n-fold
disjunction or conjunction of its enumerated body.  Empty enumerations
produce the canonical falsum / verum stand-ins.
"""

from __future__ import annotations

from .hf import HFSet
from .syntax import (
    And,
    Eq,
    Exists,
    ExistsIndex,
    FamilyApp,
    Forall,
    ForallFamily,
    ForallIndex,
    Formula,
    HFLiteral,
    Iff,
    Implies,
    IndexConst,
    IndexVar,
    Mem,
    Node,
    Not,
    Or,
    SetVar,
    Term,
    _and_chain,
    _or_chain,
    all_names,
    fresh_name,
    subst_index_var,
    well_formed,
)

__all__ = ["ExpandError", "expand_finite_family", "expand_index_quantifiers"]


class ExpandError(Exception):
    """Raised when an index set that must be enumerated is not a literal."""

    def __init__(self, message: str, offender: Node | None = None, code: str = "NOT_LITERAL"):
        super().__init__(message)
        self.message = message
        self.offender = offender
        self.code = code


def expand_finite_family(phi: Formula) -> Formula:
    """Compile away every family binder and bounded index quantifier.

    Requires every family binder (and every surviving index quantifier) to
    range over a literal index set; the output contains no family or index
    quantifier nodes and is equivalent on every model.
    """
    diag = well_formed(phi)
    if not diag:
        raise ExpandError(f"ill-formed input: {diag.reason}", diag.offender, code="ILL_FORMED")
    forbidden = set(all_names(phi))

    def positional_name(base: str, pos: int) -> str:
        candidate = f"{base}{pos}"
        if candidate in forbidden:
            candidate = fresh_name(candidate, forbidden)
        forbidden.add(candidate)
        return candidate

    def go_term(t: Term, fams: dict[str, dict[HFSet, Term]]) -> Term:
        if isinstance(t, FamilyApp):
            mapping = fams.get(t.family)
            if mapping is None:
                raise ExpandError(
                    f"family {t.family!r} has no enclosing binder being expanded", t,
                    code="ILL_FORMED",
                )
            if isinstance(t.index, IndexVar):
                raise ExpandError(
                    "generic family occurrence is not enclosed by an index quantifier", t,
                    code="ILL_FORMED",
                )
            assert isinstance(t.index, IndexConst)
            if t.index.value not in mapping:
                raise ExpandError(
                    "constant label lies outside the binder's index set", t,
                    code="ILL_FORMED",
                )
            return mapping[t.index.value]
        return t

    def go(f: Formula, fams: dict[str, dict[HFSet, Term]]) -> Formula:
        match f:
            case Mem(lhs, rhs):
                return Mem(go_term(lhs, fams), go_term(rhs, fams))
            case Eq(lhs, rhs):
                return Eq(go_term(lhs, fams), go_term(rhs, fams))
            case Not(body):
                return Not(go(body, fams))
            case And(lhs, rhs):
                return And(go(lhs, fams), go(rhs, fams))
            case Or(lhs, rhs):
                return Or(go(lhs, fams), go(rhs, fams))
            case Implies(lhs, rhs):
                return Implies(go(lhs, fams), go(rhs, fams))
            case Iff(lhs, rhs):
                return Iff(go(lhs, fams), go(rhs, fams))
            case Forall(var, body):
                return Forall(var, go(body, fams))
            case Exists(var, body):
                return Exists(var, go(body, fams))
            case ForallFamily(family, _, index_set, body):
                if not isinstance(index_set, HFLiteral):
                    raise ExpandError(
                        "family binder index set is not a literal", index_set
                    )
                elems = index_set.value.elements
                mapping: dict[HFSet, Term] = {}
                names: list[str] = []
                for pos, c in enumerate(elems):
                    name = positional_name(family, pos)
                    names.append(name)
                    mapping[c] = SetVar(name)
                out = go(body, {**fams, family: mapping})
                for name in reversed(names):
                    out = Forall(name, out)
                return out
            case ExistsIndex(index_var, index_set, body):
                if not isinstance(index_set, HFLiteral):
                    raise ExpandError(
                        "bounded index quantifier set is not a literal", index_set
                    )
                parts = [
                    go(subst_index_var(body, index_var, c), fams)
                    for c in index_set.value.elements
                ]
                return _or_chain(parts, body)
            case ForallIndex(index_var, index_set, body):
                if not isinstance(index_set, HFLiteral):
                    raise ExpandError(
                        "bounded index quantifier set is not a literal", index_set
                    )
                parts = [
                    go(subst_index_var(body, index_var, c), fams)
                    for c in index_set.value.elements
                ]
                return _and_chain(parts, body)
        raise TypeError(f"not a formula: {f!r}")

    return go(phi, {})


def expand_index_quantifiers(phi: Formula) -> Formula:
    """Rewrite every bounded index quantifier over a literal set into the
    corresponding finite disjunction / conjunction, leaving family binders
    and non-literal quantifiers in place."""

    def go(f: Formula) -> Formula:
        match f:
            case Mem(_, _) | Eq(_, _):
                return f
            case Not(body):
                return Not(go(body))
            case And(lhs, rhs):
                return And(go(lhs), go(rhs))
            case Or(lhs, rhs):
                return Or(go(lhs), go(rhs))
            case Implies(lhs, rhs):
                return Implies(go(lhs), go(rhs))
            case Iff(lhs, rhs):
                return Iff(go(lhs), go(rhs))
            case Forall(var, body):
                return Forall(var, go(body))
            case Exists(var, body):
                return Exists(var, go(body))
            case ForallFamily(family, index_var, index_set, body):
                return ForallFamily(family, index_var, index_set, go(body))
            case ExistsIndex(index_var, index_set, body):
                if isinstance(index_set, HFLiteral):
                    parts = [
                        go(subst_index_var(body, index_var, c))
                        for c in index_set.value.elements
                    ]
                    return _or_chain(parts, body)
                return ExistsIndex(index_var, index_set, go(body))
            case ForallIndex(index_var, index_set, body):
                if isinstance(index_set, HFLiteral):
                    parts = [
                        go(subst_index_var(body, index_var, c))
                        for c in index_set.value.elements
                    ]
                    return _and_chain(parts, body)
                return ForallIndex(index_var, index_set, go(body))
        raise TypeError(f"not a formula: {f!r}")

    return go(phi)
