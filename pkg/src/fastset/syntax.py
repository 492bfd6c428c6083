"""Abstract syntax for the extended first-order set language.

Three disjoint namespaces share the identifier syntax: set variables,
index variables (the labels of generic family variables), and family
names.  Binders:

  Forall/Exists        bind a set variable
  ForallFamily         binds a family name together with its generic label
  ExistsIndex/ForallIndex  bind an index variable over an index-set term

Well-formedness ties every family application to an enclosing family
binder and every index quantifier mentioning that family to the binder's
own index set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union

from .hf import HFSet, empty_set

RESERVED_WORDS = frozenset(
    {"A", "E", "fam", "in", "qed", "axiom", "el1", "el2", "expand", "mp", "taut", "ui", "ug"}
)
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def is_valid_var_name(name: str) -> bool:
    return bool(_NAME_RE.match(name)) and name not in RESERVED_WORDS


# ---------------------------------------------------------------------------
# Node types


class Index:
    pass


@dataclass(frozen=True)
class IndexVar(Index):
    name: str


@dataclass(frozen=True)
class IndexConst(Index):
    value: HFSet


class Term:
    pass


@dataclass(frozen=True)
class SetVar(Term):
    name: str


@dataclass(frozen=True)
class FamilyApp(Term):
    family: str
    index: Index


@dataclass(frozen=True)
class HFLiteral(Term):
    value: HFSet


class Formula:
    pass


@dataclass(frozen=True)
class Mem(Formula):
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Eq(Formula):
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Or(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Iff(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ForallFamily(Formula):
    family: str
    index_var: str
    index_set: Term
    body: Formula


@dataclass(frozen=True)
class ExistsIndex(Formula):
    index_var: str
    index_set: Term
    body: Formula


@dataclass(frozen=True)
class ForallIndex(Formula):
    index_var: str
    index_set: Term
    body: Formula


_BINARY = (And, Or, Implies, Iff)
_INDEX_QUANTS = (ExistsIndex, ForallIndex)

Node = Union[Formula, Term, Index]


class SubstitutionError(Exception):
    pass


class AssignmentDomainError(SubstitutionError):
    pass


class NotLiteralError(SubstitutionError):
    pass


class IllFormedError(Exception):
    pass


# ---------------------------------------------------------------------------
# Well-formedness


@dataclass(frozen=True)
class Diagnosis:
    ok: bool
    reason: Optional[str] = None
    offender: Optional[Node] = None

    def __bool__(self) -> bool:
        return self.ok


_OK = Diagnosis(True)


def well_formed(phi: Formula) -> Diagnosis:
    """Check the binding discipline; on failure report the first violating
    subterm in pre-order."""
    return _wf(phi, {}, {}, frozenset())


def _wf_term(t: Term, fams: dict, idxs: dict) -> Diagnosis:
    match t:
        case SetVar(name):
            if not is_valid_var_name(name):
                return Diagnosis(False, f"invalid variable name {name!r}", t)
            if name in fams:
                return Diagnosis(
                    False, f"{name!r} used as a set variable inside its own family binder", t
                )
            return _OK
        case FamilyApp(family, index):
            if not is_valid_var_name(family):
                return Diagnosis(False, f"invalid family name {family!r}", t)
            if family not in fams:
                return Diagnosis(False, f"family variable {family!r} is not bound by any family binder", t)
            if isinstance(index, IndexVar):
                if index.name not in idxs:
                    return Diagnosis(False, f"index variable {index.name!r} is not bound", t)
                if idxs[index.name] != fams[family]:
                    return Diagnosis(
                        False,
                        f"index variable {index.name!r} is quantified over a different set "
                        f"than the binder of family {family!r}",
                        t,
                    )
            return _OK
        case HFLiteral():
            return _OK
    return Diagnosis(False, f"unknown term {t!r}", t)


def _wf(phi: Formula, fams: dict, idxs: dict, bound: frozenset) -> Diagnosis:
    match phi:
        case Mem(lhs, rhs) | Eq(lhs, rhs):
            return _wf_term(lhs, fams, idxs) and _wf_term(rhs, fams, idxs)
        case Not(body):
            return _wf(body, fams, idxs, bound)
        case And(lhs, rhs) | Or(lhs, rhs) | Implies(lhs, rhs) | Iff(lhs, rhs):
            return _wf(lhs, fams, idxs, bound) and _wf(rhs, fams, idxs, bound)
        case Forall(var, body) | Exists(var, body):
            if not is_valid_var_name(var):
                return Diagnosis(False, f"invalid variable name {var!r}", phi)
            if var in fams:
                return Diagnosis(
                    False, f"{var!r} is bound as a set variable inside its own family binder", phi
                )
            return _wf(body, fams, idxs, bound | {var})
        case ForallFamily(family, index_var, index_set, body):
            if not is_valid_var_name(family):
                return Diagnosis(False, f"invalid family name {family!r}", phi)
            if not is_valid_var_name(index_var):
                return Diagnosis(False, f"invalid index variable name {index_var!r}", phi)
            if family in bound:
                return Diagnosis(
                    False, f"{family!r} is already a set variable in an enclosing scope", phi
                )
            if family in fams:
                return Diagnosis(False, f"family name {family!r} rebound in an enclosing family scope", phi)
            bad = _wf_term(index_set, fams, idxs)
            if not bad.ok:
                return bad
            return _wf(
                body,
                {**fams, family: index_set},
                {**idxs, index_var: index_set},
                bound,
            )
        case ExistsIndex(index_var, index_set, body) | ForallIndex(index_var, index_set, body):
            if not is_valid_var_name(index_var):
                return Diagnosis(False, f"invalid index variable name {index_var!r}", phi)
            bad = _wf_term(index_set, fams, idxs)
            if not bad.ok:
                return bad
            return _wf(body, fams, {**idxs, index_var: index_set}, bound)
    return Diagnosis(False, f"unknown formula {phi!r}", phi)


# ---------------------------------------------------------------------------
# Variable bookkeeping


def free_vars(phi: Formula) -> frozenset[str]:
    """Free set variables.  Family names and index variables are never
    free in a well-formed formula and are not reported."""
    match phi:
        case Mem(lhs, rhs) | Eq(lhs, rhs):
            return _term_free(lhs) | _term_free(rhs)
        case Not(body):
            return free_vars(body)
        case And(lhs, rhs) | Or(lhs, rhs) | Implies(lhs, rhs) | Iff(lhs, rhs):
            return free_vars(lhs) | free_vars(rhs)
        case Forall(var, body) | Exists(var, body):
            return free_vars(body) - {var}
        case ForallFamily(_, _, index_set, body):
            return _term_free(index_set) | free_vars(body)
        case ExistsIndex(_, index_set, body) | ForallIndex(_, index_set, body):
            return _term_free(index_set) | free_vars(body)
    raise TypeError(f"not a formula: {phi!r}")


def _term_free(t: Term) -> frozenset[str]:
    if isinstance(t, SetVar):
        return frozenset((t.name,))
    return frozenset()


def term_family_names(t: Term) -> frozenset[str]:
    if isinstance(t, FamilyApp):
        return frozenset((t.family,))
    return frozenset()


def term_index_vars(t: Term) -> frozenset[str]:
    if isinstance(t, FamilyApp) and isinstance(t.index, IndexVar):
        return frozenset((t.index.name,))
    return frozenset()


def subformulas(phi: Formula) -> Iterator[Formula]:
    """Pre-order traversal of all formula nodes."""
    yield phi
    match phi:
        case Not(body):
            yield from subformulas(body)
        case And(lhs, rhs) | Or(lhs, rhs) | Implies(lhs, rhs) | Iff(lhs, rhs):
            yield from subformulas(lhs)
            yield from subformulas(rhs)
        case Forall(_, body) | Exists(_, body):
            yield from subformulas(body)
        case ForallFamily(_, _, _, body):
            yield from subformulas(body)
        case ExistsIndex(_, _, body) | ForallIndex(_, _, body):
            yield from subformulas(body)


def terms_of(phi: Formula) -> Iterator[Term]:
    for sub in subformulas(phi):
        match sub:
            case Mem(lhs, rhs) | Eq(lhs, rhs):
                yield lhs
                yield rhs
            case ForallFamily(_, _, index_set, _):
                yield index_set
            case ExistsIndex(_, index_set, _) | ForallIndex(_, index_set, _):
                yield index_set


def all_names(phi: Formula) -> frozenset[str]:
    """Every identifier occurring anywhere (set/index/family, free or
    bound).  Used to pick fresh names."""
    names: set[str] = set()
    for sub in subformulas(phi):
        match sub:
            case Forall(var, _) | Exists(var, _):
                names.add(var)
            case ForallFamily(family, index_var, _, _):
                names.add(family)
                names.add(index_var)
            case ExistsIndex(index_var, _, _) | ForallIndex(index_var, _, _):
                names.add(index_var)
    for t in terms_of(phi):
        names |= _names_in_term(t)
    return frozenset(names)


def _names_in_term(t: Term) -> frozenset[str]:
    match t:
        case SetVar(name):
            return frozenset((name,))
        case FamilyApp(family, IndexVar(iname)):
            return frozenset((family, iname))
        case FamilyApp(family, _):
            return frozenset((family,))
    return frozenset()


def fresh_name(base: str, forbidden) -> str:
    """Deterministic fresh-name scheme: append the smallest unused numeric
    suffix to the base name."""
    k = 1
    while f"{base}{k}" in forbidden:
        k += 1
    return f"{base}{k}"


# ---------------------------------------------------------------------------
# Blind bound-variable renamers (targets are fresh, so no capture checks)


def _rename_set_var(phi: Formula, old: str, new: str) -> Formula:
    def term(t: Term) -> Term:
        if isinstance(t, SetVar) and t.name == old:
            return SetVar(new)
        return t

    match phi:
        case Mem(lhs, rhs):
            return Mem(term(lhs), term(rhs))
        case Eq(lhs, rhs):
            return Eq(term(lhs), term(rhs))
        case Not(body):
            return Not(_rename_set_var(body, old, new))
        case And(lhs, rhs):
            return And(_rename_set_var(lhs, old, new), _rename_set_var(rhs, old, new))
        case Or(lhs, rhs):
            return Or(_rename_set_var(lhs, old, new), _rename_set_var(rhs, old, new))
        case Implies(lhs, rhs):
            return Implies(_rename_set_var(lhs, old, new), _rename_set_var(rhs, old, new))
        case Iff(lhs, rhs):
            return Iff(_rename_set_var(lhs, old, new), _rename_set_var(rhs, old, new))
        case Forall(var, body):
            if var == old:
                return phi
            return Forall(var, _rename_set_var(body, old, new))
        case Exists(var, body):
            if var == old:
                return phi
            return Exists(var, _rename_set_var(body, old, new))
        case ForallFamily(family, index_var, index_set, body):
            return ForallFamily(family, index_var, term(index_set), _rename_set_var(body, old, new))
        case ExistsIndex(index_var, index_set, body):
            return ExistsIndex(index_var, term(index_set), _rename_set_var(body, old, new))
        case ForallIndex(index_var, index_set, body):
            return ForallIndex(index_var, term(index_set), _rename_set_var(body, old, new))
    raise TypeError(f"not a formula: {phi!r}")


def _rename_family(phi: Formula, old: str, new: str) -> Formula:
    def term(t: Term) -> Term:
        if isinstance(t, FamilyApp) and t.family == old:
            return FamilyApp(new, t.index)
        return t

    def go(f: Formula) -> Formula:
        match f:
            case Mem(lhs, rhs):
                return Mem(term(lhs), term(rhs))
            case Eq(lhs, rhs):
                return Eq(term(lhs), term(rhs))
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
                if family == old:
                    return ForallFamily(family, index_var, term(index_set), body)
                return ForallFamily(family, index_var, term(index_set), go(body))
            case ExistsIndex(index_var, index_set, body):
                return ExistsIndex(index_var, term(index_set), go(body))
            case ForallIndex(index_var, index_set, body):
                return ForallIndex(index_var, term(index_set), go(body))
        raise TypeError(f"not a formula: {f!r}")

    return go(phi)


def _rename_index_var(phi: Formula, old: str, new: str) -> Formula:
    """Rename free occurrences of an index variable (inside family
    applications), stopping at rebinding binders."""

    def term(t: Term) -> Term:
        if isinstance(t, FamilyApp) and isinstance(t.index, IndexVar) and t.index.name == old:
            return FamilyApp(t.family, IndexVar(new))
        return t

    def go(f: Formula) -> Formula:
        match f:
            case Mem(lhs, rhs):
                return Mem(term(lhs), term(rhs))
            case Eq(lhs, rhs):
                return Eq(term(lhs), term(rhs))
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
                if index_var == old:
                    return ForallFamily(family, index_var, term(index_set), body)
                return ForallFamily(family, index_var, term(index_set), go(body))
            case ExistsIndex(index_var, index_set, body):
                if index_var == old:
                    return ExistsIndex(index_var, term(index_set), body)
                return ExistsIndex(index_var, term(index_set), go(body))
            case ForallIndex(index_var, index_set, body):
                if index_var == old:
                    return ForallIndex(index_var, term(index_set), body)
                return ForallIndex(index_var, term(index_set), go(body))
        raise TypeError(f"not a formula: {f!r}")

    return go(phi)


# ---------------------------------------------------------------------------
# Capture-avoiding substitution of a term for a set variable


def subst_set_var(phi: Formula, x: str, t: Term) -> Formula:
    """Substitute t for the free occurrences of set variable x.  Bound
    variables that would capture a free name of t are renamed with the
    smallest-numeric-suffix scheme."""
    t_sets = _term_free(t)
    t_fams = term_family_names(t)
    t_idxs = term_index_vars(t)

    def term(s: Term) -> Term:
        if isinstance(s, SetVar) and s.name == x:
            return t
        return s

    def go(f: Formula) -> Formula:
        match f:
            case Mem(lhs, rhs):
                return Mem(term(lhs), term(rhs))
            case Eq(lhs, rhs):
                return Eq(term(lhs), term(rhs))
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
            case Forall(var, body) | Exists(var, body):
                cons = Forall if isinstance(f, Forall) else Exists
                if var == x:
                    return f
                if var in t_sets and x in free_vars(body):
                    var2 = fresh_name(var, all_names(body) | t_sets | t_fams | t_idxs | {x})
                    body = _rename_set_var(body, var, var2)
                    var = var2
                return cons(var, go(body))
            case ForallFamily(family, index_var, index_set, body):
                index_set = term(index_set)
                if family in t_fams and x in free_vars(body):
                    f2 = fresh_name(family, all_names(body) | t_sets | t_fams | t_idxs | {x})
                    body = _rename_family(body, family, f2)
                    family = f2
                if index_var in t_idxs and x in free_vars(body):
                    i2 = fresh_name(index_var, all_names(body) | t_sets | t_fams | t_idxs | {x})
                    body = _rename_index_var(body, index_var, i2)
                    index_var = i2
                return ForallFamily(family, index_var, index_set, go(body))
            case ExistsIndex(index_var, index_set, body) | ForallIndex(index_var, index_set, body):
                cons = ExistsIndex if isinstance(f, ExistsIndex) else ForallIndex
                index_set = term(index_set)
                if index_var in t_idxs and x in free_vars(body):
                    i2 = fresh_name(index_var, all_names(body) | t_sets | t_fams | t_idxs | {x})
                    body = _rename_index_var(body, index_var, i2)
                    index_var = i2
                return cons(index_var, index_set, go(body))
        raise TypeError(f"not a formula: {f!r}")

    return go(phi)


def subst_index_var(phi: Formula, j: str, c: HFSet) -> Formula:
    """Replace free occurrences of index variable j by the constant label c
    (used when enumerating a bounded index quantifier)."""

    def term(t: Term) -> Term:
        if isinstance(t, FamilyApp) and isinstance(t.index, IndexVar) and t.index.name == j:
            return FamilyApp(t.family, IndexConst(c))
        return t

    def go(f: Formula) -> Formula:
        match f:
            case Mem(lhs, rhs):
                return Mem(term(lhs), term(rhs))
            case Eq(lhs, rhs):
                return Eq(term(lhs), term(rhs))
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
                if index_var == j:
                    return ForallFamily(family, index_var, term(index_set), body)
                return ForallFamily(family, index_var, term(index_set), go(body))
            case ExistsIndex(index_var, index_set, body):
                if index_var == j:
                    return ExistsIndex(index_var, term(index_set), body)
                return ExistsIndex(index_var, term(index_set), go(body))
            case ForallIndex(index_var, index_set, body):
                if index_var == j:
                    return ForallIndex(index_var, term(index_set), body)
                return ForallIndex(index_var, term(index_set), go(body))
        raise TypeError(f"not a formula: {f!r}")

    return go(phi)


# ---------------------------------------------------------------------------
# Empty-enumeration placeholders

def _first_free_set_var(phi: Formula) -> Optional[str]:
    def walk(f: Formula, bound: frozenset) -> Optional[str]:
        match f:
            case Mem(lhs, rhs) | Eq(lhs, rhs):
                for t in (lhs, rhs):
                    if isinstance(t, SetVar) and t.name not in bound:
                        return t.name
                return None
            case Not(body):
                return walk(body, bound)
            case And(lhs, rhs) | Or(lhs, rhs) | Implies(lhs, rhs) | Iff(lhs, rhs):
                return walk(lhs, bound) or walk(rhs, bound)
            case Forall(var, body) | Exists(var, body):
                return walk(body, bound | {var})
            case ForallFamily(_, _, index_set, body):
                if isinstance(index_set, SetVar) and index_set.name not in bound:
                    return index_set.name
                return walk(body, bound)
            case ExistsIndex(_, index_set, body) | ForallIndex(_, index_set, body):
                if isinstance(index_set, SetVar) and index_set.name not in bound:
                    return index_set.name
                return walk(body, bound)
        return None

    return walk(phi, frozenset())


def falsum_like(body: Formula) -> Formula:
    """Canonical stand-in for an empty disjunction: ~ t = t, with t the
    leftmost free set variable of the dropped body (no new free names), or
    the empty-set literal when the body is closed."""
    v = _first_free_set_var(body)
    t: Term = SetVar(v) if v is not None else HFLiteral(empty_set)
    return Not(Eq(t, t))


def verum_like(body: Formula) -> Formula:
    """Canonical stand-in for an empty conjunction: t = t."""
    v = _first_free_set_var(body)
    t: Term = SetVar(v) if v is not None else HFLiteral(empty_set)
    return Eq(t, t)


# ---------------------------------------------------------------------------
# Family instantiation (the step from a family binder over a literal index
# set to the formula about concretely named members)


def mentions_family(phi: Formula, family: str) -> bool:
    for t in terms_of(phi):
        if isinstance(t, FamilyApp) and t.family == family:
            return True
    return False


def subst_family(phi: Formula, family: str, assignment: Mapping[HFSet, Term]) -> Formula:
    """Instantiate a family binder over a literal index set.

    phi must be ForallFamily(family, i, L, body) with L a literal; the
    assignment must map exactly the elements of L to set variables or
    literals.  Every bounded index quantifier over L that mentions the
    family is replaced by the finite disjunction/conjunction over L's
    elements, and every application of the family at a constant label is
    replaced by the assigned term.  The result mentions the family
    nowhere.
    """
    if not isinstance(phi, ForallFamily) or phi.family != family:
        raise SubstitutionError(f"formula is not a family binder for {family!r}")
    if not isinstance(phi.index_set, HFLiteral):
        raise NotLiteralError("family binder index set is not a literal")
    elems = phi.index_set.value.elements
    if set(assignment.keys()) != set(elems):
        raise AssignmentDomainError(
            "assignment domain does not match the index set elements"
        )
    for target in assignment.values():
        if not isinstance(target, (SetVar, HFLiteral)):
            raise AssignmentDomainError("assignment targets must be set variables or literals")

    target_free = {t.name for t in assignment.values() if isinstance(t, SetVar)}
    body = _avoid_binding(phi.body, target_free)

    literal = phi.index_set

    def term(t: Term) -> Term:
        if isinstance(t, FamilyApp) and t.family == family:
            if isinstance(t.index, IndexConst):
                if t.index.value not in assignment:
                    raise AssignmentDomainError(
                        f"constant label {t.index.value!r} lies outside the binder's index set"
                    )
                return assignment[t.index.value]
            raise SubstitutionError(
                "generic family occurrence is not enclosed by an index quantifier"
            )
        return t

    def go(f: Formula) -> Formula:
        match f:
            case Mem(lhs, rhs):
                return Mem(term(lhs), term(rhs))
            case Eq(lhs, rhs):
                return Eq(term(lhs), term(rhs))
            case Not(b):
                return Not(go(b))
            case And(lhs, rhs):
                return And(go(lhs), go(rhs))
            case Or(lhs, rhs):
                return Or(go(lhs), go(rhs))
            case Implies(lhs, rhs):
                return Implies(go(lhs), go(rhs))
            case Iff(lhs, rhs):
                return Iff(go(lhs), go(rhs))
            case Forall(var, b):
                return Forall(var, go(b))
            case Exists(var, b):
                return Exists(var, go(b))
            case ForallFamily(fam2, index_var, index_set, b):
                return ForallFamily(fam2, index_var, term(index_set), go(b))
            case ExistsIndex(index_var, index_set, b) if index_set == literal and mentions_family(b, family):
                parts = [go(subst_index_var(b, index_var, c)) for c in elems]
                return _or_chain(parts, b)
            case ForallIndex(index_var, index_set, b) if index_set == literal and mentions_family(b, family):
                parts = [go(subst_index_var(b, index_var, c)) for c in elems]
                return _and_chain(parts, b)
            case ExistsIndex(index_var, index_set, b):
                return ExistsIndex(index_var, term(index_set), go(b))
            case ForallIndex(index_var, index_set, b):
                return ForallIndex(index_var, term(index_set), go(b))
        raise TypeError(f"not a formula: {f!r}")

    return go(body)


def _or_chain(parts: list[Formula], original_body: Formula) -> Formula:
    if not parts:
        return falsum_like(original_body)
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


def _and_chain(parts: list[Formula], original_body: Formula) -> Formula:
    if not parts:
        return verum_like(original_body)
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def _avoid_binding(phi: Formula, names: set[str]) -> Formula:
    """Rename binders whose bound name collides with any of the given free
    names, so that inserting those names never captures."""
    if not names:
        return phi
    out = phi
    changed = True
    while changed:
        changed = False
        for sub in subformulas(out):
            match sub:
                case Forall(var, _) | Exists(var, _) if var in names:
                    var2 = fresh_name(var, all_names(out) | names)
                    out = _rebind_set_var(out, sub, var2)
                    changed = True
                case ForallFamily(family, _, _, _) if family in names:
                    f2 = fresh_name(family, all_names(out) | names)
                    out = _rebind_family(out, sub, f2)
                    changed = True
            if changed:
                break
    return out


def _rebind_set_var(phi: Formula, binder: Formula, new: str) -> Formula:
    """Replace one specific Forall/Exists node with a renamed binder."""

    def go(f: Formula) -> Formula:
        if f is binder:
            assert isinstance(f, (Forall, Exists))
            cons = Forall if isinstance(f, Forall) else Exists
            return cons(new, _rename_set_var(f.body, f.var, new))
        return _map_children(f, go)

    return go(phi)


def _rebind_family(phi: Formula, binder: Formula, new: str) -> Formula:
    def go(f: Formula) -> Formula:
        if f is binder:
            assert isinstance(f, ForallFamily)
            return ForallFamily(
                new, f.index_var, f.index_set, _rename_family(f.body, f.family, new)
            )
        return _map_children(f, go)

    return go(phi)


def _map_children(f: Formula, go) -> Formula:
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
            return ExistsIndex(index_var, index_set, go(body))
        case ForallIndex(index_var, index_set, body):
            return ForallIndex(index_var, index_set, go(body))
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Alpha-equivalence


def alpha_eq(phi: Formula, psi: Formula) -> bool:
    """Equality up to consistent renaming of bound set variables, bound
    index variables, and family names."""
    return _aeq(phi, psi, {}, {}, [0])


def _aeq_term(a: Term, b: Term, la: dict, lb: dict) -> bool:
    match a, b:
        case SetVar(x), SetVar(y):
            ka, kb = ("s", x), ("s", y)
            if ka in la or kb in lb:
                return la.get(ka) == lb.get(kb) and la.get(ka) is not None
            return x == y
        case HFLiteral(u), HFLiteral(v):
            return u is v
        case FamilyApp(f, i), FamilyApp(g, j):
            kf, kg = ("f", f), ("f", g)
            if kf in la or kg in lb:
                if la.get(kf) != lb.get(kg) or la.get(kf) is None:
                    return False
            elif f != g:
                return False
            match i, j:
                case IndexVar(m), IndexVar(n):
                    km, kn = ("i", m), ("i", n)
                    if km in la or kn in lb:
                        return la.get(km) == lb.get(kn) and la.get(km) is not None
                    return m == n
                case IndexConst(u), IndexConst(v):
                    return u is v
            return False
    return False


def _aeq(a: Formula, b: Formula, la: dict, lb: dict, ctr: list) -> bool:
    if type(a) is not type(b):
        return False
    match a, b:
        case (Mem(l1, r1), Mem(l2, r2)) | (Eq(l1, r1), Eq(l2, r2)):
            return _aeq_term(l1, l2, la, lb) and _aeq_term(r1, r2, la, lb)
        case Not(b1), Not(b2):
            return _aeq(b1, b2, la, lb, ctr)
        case (And(l1, r1), And(l2, r2)) | (Or(l1, r1), Or(l2, r2)) | (
            Implies(l1, r1),
            Implies(l2, r2),
        ) | (Iff(l1, r1), Iff(l2, r2)):
            return _aeq(l1, l2, la, lb, ctr) and _aeq(r1, r2, la, lb, ctr)
        case (Forall(x, b1), Forall(y, b2)) | (Exists(x, b1), Exists(y, b2)):
            ctr[0] += 1
            mark = ctr[0]
            return _aeq(b1, b2, {**la, ("s", x): mark}, {**lb, ("s", y): mark}, ctr)
        case ForallFamily(f1, i1, s1, b1), ForallFamily(f2, i2, s2, b2):
            if not _aeq_term(s1, s2, la, lb):
                return False
            ctr[0] += 1
            mf = ctr[0]
            ctr[0] += 1
            mi = ctr[0]
            la2 = {**la, ("f", f1): mf, ("i", i1): mi}
            lb2 = {**lb, ("f", f2): mf, ("i", i2): mi}
            return _aeq(b1, b2, la2, lb2, ctr)
        case (ExistsIndex(i1, s1, b1), ExistsIndex(i2, s2, b2)) | (
            ForallIndex(i1, s1, b1),
            ForallIndex(i2, s2, b2),
        ):
            if not _aeq_term(s1, s2, la, lb):
                return False
            ctr[0] += 1
            mi = ctr[0]
            return _aeq(b1, b2, {**la, ("i", i1): mi}, {**lb, ("i", i2): mi}, ctr)
    return False
