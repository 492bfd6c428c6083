"""The eleven nonlogical axioms of FAST, plus generators for the
separation / substitution / function-existence scheme instances and the
no-universal-set theorem statement.

The first ten axioms are stated relationally: there are no function
symbols, so constructed sets (sums, powersets, pairs, images) are
characterized by membership conditions.  Two-tuples use the encoding
<x, y> = {x, {x, y}}.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache

from .syntax import (
    And,
    Eq,
    Exists,
    ExistsIndex,
    Forall,
    ForallFamily,
    ForallIndex,
    Formula,
    Iff,
    Implies,
    Mem,
    SetVar,
    all_names,
    free_vars,
    fresh_name,
    subformulas,
    subst_set_var,
    well_formed,
)


class AxiomName(Enum):
    EXT = "EXT"
    EMPTY = "EMPTY"
    SUM = "SUM"
    POW = "POW"
    INF = "INF"
    REG = "REG"
    DIFF = "DIFF"
    PROD = "PROD"
    IM = "IM"
    REV = "REV"
    FAM = "FAM"


class SchemeError(Exception):
    pass


def _pair_char(p: str, x: str, y: str, w: str = "w", v: str = "v") -> str:
    # z is the two-tuple <x, y> = {x, {x, y}}, characterized extensionally
    return (
        f"A {w} . ({w} in {p} <-> ({w} = {x} \\/ "
        f"A {v} . ({v} in {w} <-> ({v} = {x} \\/ {v} = {y}))))"
    )


def _pair_in(f: str, x: str, y: str, p: str = "p") -> str:
    return f"E {p} . ({p} in {f} /\\ {_pair_char(p, x, y)})"


def _is_func(f: str, x_set: str) -> str:
    # every member of f is a two-tuple <x, y> with x in the domain, and for
    # every x in the domain f holds precisely one such two-tuple
    each_member = f"A p . (p in {f} -> E x . (x in {x_set} /\\ E y . {_pair_char('p', 'x', 'y')}))"
    exactly_one = (
        f"A x . (x in {x_set} -> E p . ((p in {f} /\\ E y . {_pair_char('p', 'x', 'y')}) "
        f"/\\ A q . ((q in {f} /\\ E y . {_pair_char('q', 'x', 'y')}) -> q = p)))"
    )
    return f"({each_member} /\\ {exactly_one})"


_AXIOM_TEXT: dict[AxiomName, str] = {
    AxiomName.EXT: "A X . A Y . ((A z . (z in X <-> z in Y)) -> X = Y)",
    AxiomName.EMPTY: "E X . A y . ~ y in X",
    AxiomName.SUM: "A X . E Y . A z . (z in Y <-> E w . (w in X /\\ z in w))",
    AxiomName.POW: "A X . E Y . A z . (z in Y <-> A w . (w in z -> w in X))",
    AxiomName.INF: (
        "E X . ((E e . (e in X /\\ A w . ~ w in e)) "
        "/\\ A x . (x in X -> E s . (s in X /\\ A w . (w in s <-> w = x))))"
    ),
    AxiomName.REG: (
        "A X . ((E w . w in X) -> E Y . (Y in X /\\ ~ E z . (z in Y /\\ z in X)))"
    ),
    AxiomName.DIFF: "A X . A Y . E Z . A w . (w in Z <-> (w in X /\\ ~ w in Y))",
    AxiomName.PROD: (
        "A X . A Y . E Z . A p . (p in Z <-> "
        f"E x . (x in X /\\ E y . (y in Y /\\ {_pair_char('p', 'x', 'y')})))"
    ),
    AxiomName.IM: (
        f"A f . A X . ({_is_func('f', 'X')} -> "
        f"E Z . A y . (y in Z <-> E x . (x in X /\\ {_pair_in('f', 'x', 'y')})))"
    ),
    AxiomName.REV: (
        f"A f . A X . ({_is_func('f', 'X')} -> "
        f"A y . E Z . A x . (x in Z <-> (x in X /\\ {_pair_in('f', 'x', 'y')})))"
    ),
    AxiomName.FAM: "A X . fam u[i] in X . E Z . A y . (y in Z <-> E i in X . y = u[i])",
}

_NO_UNIVERSAL_SET_TEXT = (
    "A X . fam u[i] in X . ~ E Z . "
    "((A y . (y in Z <-> E i in X . y = u[i])) /\\ A y . y in Z)"
)


@lru_cache(maxsize=None)
def axiom_formula(name: AxiomName) -> Formula:
    """The closed Formula of one of the eleven axioms."""
    from .parser import parse_formula

    return parse_formula(_AXIOM_TEXT[name])


@lru_cache(maxsize=None)
def no_universal_set() -> Formula:
    """No family over any index set collects the entire universe."""
    from .parser import parse_formula

    return parse_formula(_NO_UNIVERSAL_SET_TEXT)


def all_axioms() -> dict[AxiomName, Formula]:
    return {name: axiom_formula(name) for name in AxiomName}


# ---------------------------------------------------------------------------
# Scheme instances.  The parameter formula must be family-binder-free; its
# extra free variables are closed universally on the outside.


def _check_scheme_param(
    phi: Formula, distinguished: tuple[str, ...], must_be_free: tuple[str, ...]
) -> None:
    diag = well_formed(phi)
    if not diag:
        raise SchemeError(f"parameter formula is ill-formed: {diag.reason}")
    for sub in subformulas(phi):
        if isinstance(sub, (ForallFamily, ExistsIndex, ForallIndex)):
            raise SchemeError("parameter formula must not contain family binders")
    fv = free_vars(phi)
    for v in must_be_free:
        if v not in fv:
            raise SchemeError(f"distinguished variable {v!r} is not free in the parameter")
    if len(set(distinguished)) != len(distinguished):
        raise SchemeError("distinguished variables must be distinct")


def _close_over(extras, inst: Formula) -> Formula:
    for w in sorted(extras, reverse=True):
        inst = Forall(w, inst)
    return inst


def _pick(base: str, used: set[str]) -> str:
    if base not in used:
        used.add(base)
        return base
    name = fresh_name(base, used)
    used.add(name)
    return name


def sep_instance(phi: Formula, z: str) -> Formula:
    """For every X there is the subset of X whose members satisfy phi(z)."""
    _check_scheme_param(phi, (z,), (z,))
    used = set(all_names(phi)) | {z}
    x_set = _pick("X", used)
    y_set = _pick("Y", used)
    inst = Forall(
        x_set,
        Exists(
            y_set,
            Forall(
                z,
                Iff(
                    Mem(SetVar(z), SetVar(y_set)),
                    And(Mem(SetVar(z), SetVar(x_set)), phi),
                ),
            ),
        ),
    )
    return _close_over(free_vars(phi) - {z}, inst)


def _unique_choice(phi: Formula, x: str, y: str, used: set[str]) -> Formula:
    """E y . (phi /\\ A y' . (phi[y:=y'] -> y' = y)) with y' fresh."""
    y2 = fresh_name(y, used)
    used.add(y2)
    return Exists(
        y,
        And(
            phi,
            Forall(
                y2,
                Implies(subst_set_var(phi, y, SetVar(y2)), Eq(SetVar(y2), SetVar(y))),
            ),
        ),
    )


def sub_instance(phi: Formula, x: str, y: str) -> Formula:
    """If phi(x, y) is functional on X then the image of X under it is a
    set."""
    _check_scheme_param(phi, (x, y), (y,))
    used = set(all_names(phi)) | {x, y}
    x_set = _pick("X", used)
    z_set = _pick("Z", used)
    u = _pick("u", used)
    v = _pick("v", used)
    premise = Forall(
        x,
        Implies(Mem(SetVar(x), SetVar(x_set)), _unique_choice(phi, x, y, used)),
    )
    image_member = subst_set_var(subst_set_var(phi, x, SetVar(v)), y, SetVar(u))
    conclusion = Exists(
        z_set,
        Forall(
            u,
            Iff(
                Mem(SetVar(u), SetVar(z_set)),
                Exists(v, And(Mem(SetVar(v), SetVar(x_set)), image_member)),
            ),
        ),
    )
    inst = Forall(x_set, Implies(premise, conclusion))
    return _close_over(free_vars(phi) - {x, y}, inst)


def _pair_in_ast(f: str, x: str, y: str, used: set[str]) -> Formula:
    from .parser import parse_formula

    p = _pick("p", set(used))
    w = _pick("w", set(used) | {p})
    v = _pick("v", set(used) | {p, w})
    text = f"E {p} . ({p} in {f} /\\ {_pair_char(p, x, y, w, v)})"
    return parse_formula(text)


def main_instance(phi: Formula, x: str, y: str) -> Formula:
    """If phi(x, y) is functional on X then some set f of two-tuples acts
    as the function it prescribes."""
    _check_scheme_param(phi, (x, y), (y,))
    used = set(all_names(phi)) | {x, y}
    x_set = _pick("X", used)
    f = _pick("f", used)
    premise = Forall(
        x,
        Implies(Mem(SetVar(x), SetVar(x_set)), _unique_choice(phi, x, y, set(used))),
    )
    y2 = fresh_name(y, used)
    used.add(y2)
    maps_to = _pair_in_ast(f, x, y, used)
    maps_to_y2 = _pair_in_ast(f, x, y2, used)
    graph_matches = Exists(
        y,
        And(
            Iff(maps_to, phi),
            Forall(
                y2,
                Implies(
                    Iff(maps_to_y2, subst_set_var(phi, y, SetVar(y2))),
                    Eq(SetVar(y2), SetVar(y)),
                ),
            ),
        ),
    )
    conclusion = Exists(
        f,
        Forall(x, Implies(Mem(SetVar(x), SetVar(x_set)), graph_matches)),
    )
    inst = Forall(x_set, Implies(premise, conclusion))
    return _close_over(free_vars(phi) - {x, y}, inst)
