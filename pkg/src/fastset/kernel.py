"""Hilbert-style proof-script checking.

A script is a numbered list of formulas, each justified by an axiom
citation or by one of the inference rules:

    mp <major> <minor>        modus ponens (major is A -> B, minor is A)
    taut <n1> <n2> ...        propositional consequence of the cited lines
    ui <n> <term>             instantiate a universal set quantifier
    ug <n> <var>              generalize over a set variable
    el1 <n> <literal>         instantiate the set quantifier in front of a
                              family binder with a constant index set
    el2 <n> [<lit> -> <term>, ...]
                              instantiate a family binder over a literal
                              index set with one term per label
    expand <n>                enumerate every bounded index quantifier over
                              a literal set

There is no assumption mechanism: every accepted line is a theorem of the
cited axioms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Optional, Union

from .axioms import AxiomName, axiom_formula
from .expander import expand_index_quantifiers
from .hf import HFSet, v_universe
from .parser import ParseError, SourceSpan, parse_formula, print_formula, tokenize
from .semantics import Digraph, Env, EvalError, Model, RankUniverse, eval_formula
from .syntax import (
    And,
    AssignmentDomainError,
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
    IndexVar,
    Mem,
    Not,
    NotLiteralError,
    Or,
    SetVar,
    SubstitutionError,
    Term,
    alpha_eq,
    free_vars,
    subst_family,
    subst_set_var,
)

__all__ = [
    "ReasonCode",
    "Axiom",
    "MP",
    "Taut",
    "UI",
    "UG",
    "EL1",
    "EL2",
    "Expand",
    "ProofLine",
    "ProofScript",
    "Verdict",
    "check_proof",
    "parse_proof_script",
    "load_proof_script",
    "rule_local_soundness",
    "SoundnessReport",
    "TAUT_ATOM_CAP",
]

TAUT_ATOM_CAP = 16


class ReasonCode(Enum):
    BAD_AXIOM = "BAD_AXIOM"
    BAD_MP = "BAD_MP"
    NOT_TAUT = "NOT_TAUT"
    BAD_WITNESS = "BAD_WITNESS"
    BAD_INDEX_SET = "BAD_INDEX_SET"
    ASSIGNMENT_DOMAIN = "ASSIGNMENT_DOMAIN"
    NOT_LITERAL = "NOT_LITERAL"
    BAD_EXPAND = "BAD_EXPAND"
    BAD_CITATION = "BAD_CITATION"
    GOAL_MISMATCH = "GOAL_MISMATCH"


@dataclass(frozen=True)
class Axiom:
    name: AxiomName


@dataclass(frozen=True)
class MP:
    major: int
    minor: int


@dataclass(frozen=True)
class Taut:
    premises: tuple[int, ...]


@dataclass(frozen=True)
class UI:
    premise: int
    witness: Term


@dataclass(frozen=True)
class UG:
    premise: int
    var: str


@dataclass(frozen=True)
class EL1:
    premise: int
    index_set: HFSet


@dataclass(frozen=True)
class EL2:
    premise: int
    assignment: tuple[tuple[HFSet, Term], ...]

    def mapping(self) -> dict[HFSet, Term]:
        return dict(self.assignment)


@dataclass(frozen=True)
class Expand:
    premise: int


Justification = Union[Axiom, MP, Taut, UI, UG, EL1, EL2, Expand]


@dataclass(frozen=True)
class ProofLine:
    line_no: int
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class ProofScript:
    lines: tuple[ProofLine, ...]
    goal: Formula


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    line_no: Optional[int] = None
    code: Optional[ReasonCode] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.accepted


def _reject(line_no: Optional[int], code: ReasonCode, detail: str) -> Verdict:
    return Verdict(False, line_no, code, detail)


# ---------------------------------------------------------------------------
# Propositional consequence (atoms are the maximal non-propositional
# subformulas, identified up to alpha-equivalence)


def _prop_atoms(phi: Formula, table: list[Formula]) -> Optional[object]:
    """Skeleton of phi with atoms replaced by indexes into table, or None
    when the atom cap is hit."""
    if isinstance(phi, Not):
        inner = _prop_atoms(phi.body, table)
        return None if inner is None else ("not", inner)
    if isinstance(phi, (And, Or, Implies, Iff)):
        lhs = _prop_atoms(phi.lhs, table)
        if lhs is None:
            return None
        rhs = _prop_atoms(phi.rhs, table)
        if rhs is None:
            return None
        tag = type(phi).__name__.lower()
        return (tag, lhs, rhs)
    for i, atom in enumerate(table):
        if alpha_eq(phi, atom):
            return ("atom", i)
    if len(table) >= TAUT_ATOM_CAP:
        return None
    table.append(phi)
    return ("atom", len(table) - 1)


def _prop_eval(skel, values: tuple[bool, ...]) -> bool:
    match skel:
        case ("atom", i):
            return values[i]
        case ("not", a):
            return not _prop_eval(a, values)
        case ("and", a, b):
            return _prop_eval(a, values) and _prop_eval(b, values)
        case ("or", a, b):
            return _prop_eval(a, values) or _prop_eval(b, values)
        case ("implies", a, b):
            return _prop_eval(b, values) if _prop_eval(a, values) else True
        case ("iff", a, b):
            return _prop_eval(a, values) == _prop_eval(b, values)
    raise AssertionError(skel)


def propositional_consequence(premises: list[Formula], conclusion: Formula) -> Optional[bool]:
    """Truth-table check; None when more than TAUT_ATOM_CAP atoms appear."""
    table: list[Formula] = []
    skels = []
    for p in premises:
        s = _prop_atoms(p, table)
        if s is None:
            return None
        skels.append(s)
    concl = _prop_atoms(conclusion, table)
    if concl is None:
        return None
    for values in product((False, True), repeat=len(table)):
        if all(_prop_eval(s, values) for s in skels) and not _prop_eval(concl, values):
            return False
    return True


# ---------------------------------------------------------------------------
# Checking


def check_proof(script: ProofScript) -> Verdict:
    """Accept iff every line is justified and the last line is the goal."""
    by_no: dict[int, Formula] = {}
    last_no = 0
    for line in script.lines:
        if line.line_no <= last_no:
            return _reject(line.line_no, ReasonCode.BAD_CITATION, "line numbers must increase")
        last_no = line.line_no

        def cited(n: int) -> Optional[Formula]:
            return by_no.get(n) if n < line.line_no else None

        verdict = _check_line(line, cited)
        if verdict is not None:
            return verdict
        by_no[line.line_no] = line.formula
    if not script.lines:
        return _reject(None, ReasonCode.GOAL_MISMATCH, "empty script")
    if not alpha_eq(script.lines[-1].formula, script.goal):
        return _reject(
            script.lines[-1].line_no, ReasonCode.GOAL_MISMATCH, "last line is not the goal"
        )
    return Verdict(True)


def _check_line(line: ProofLine, cited) -> Optional[Verdict]:
    no = line.line_no
    just = line.justification
    match just:
        case Axiom(name):
            if not alpha_eq(line.formula, axiom_formula(name)):
                return _reject(no, ReasonCode.BAD_AXIOM, f"formula is not axiom {name.value}")
        case MP(major, minor):
            fa, fb = cited(major), cited(minor)
            if fa is None or fb is None:
                return _reject(no, ReasonCode.BAD_CITATION, "cited line missing or not earlier")
            if not isinstance(fa, Implies):
                return _reject(no, ReasonCode.BAD_MP, "major premise is not an implication")
            if not alpha_eq(fa, Implies(fb, line.formula)):
                return _reject(no, ReasonCode.BAD_MP, "conclusion does not match the implication")
        case Taut(premises):
            forms = []
            for n in premises:
                f = cited(n)
                if f is None:
                    return _reject(no, ReasonCode.BAD_CITATION, "cited line missing or not earlier")
                forms.append(f)
            res = propositional_consequence(forms, line.formula)
            if res is None:
                return _reject(
                    no, ReasonCode.NOT_TAUT, f"more than {TAUT_ATOM_CAP} distinct atoms"
                )
            if not res:
                return _reject(
                    no, ReasonCode.NOT_TAUT, "not a propositional consequence of the cited lines"
                )
        case UI(premise, witness):
            f = cited(premise)
            if f is None:
                return _reject(no, ReasonCode.BAD_CITATION, "cited line missing or not earlier")
            if not isinstance(f, Forall):
                return _reject(no, ReasonCode.BAD_WITNESS, "premise is not a universal formula")
            try:
                expected = subst_set_var(f.body, f.var, witness)
            except SubstitutionError as exc:
                return _reject(no, ReasonCode.BAD_WITNESS, str(exc))
            if not alpha_eq(line.formula, expected):
                return _reject(no, ReasonCode.BAD_WITNESS, "line is not the instantiated premise")
        case UG(premise, var):
            f = cited(premise)
            if f is None:
                return _reject(no, ReasonCode.BAD_CITATION, "cited line missing or not earlier")
            if not alpha_eq(line.formula, Forall(var, f)):
                return _reject(no, ReasonCode.BAD_WITNESS, "line is not the generalized premise")
        case EL1(premise, index_set):
            f = cited(premise)
            if f is None:
                return _reject(no, ReasonCode.BAD_CITATION, "cited line missing or not earlier")
            if not isinstance(f, Forall) or not isinstance(f.body, ForallFamily):
                return _reject(
                    no, ReasonCode.BAD_INDEX_SET, "premise is not A X . fam ... shaped"
                )
            expected = subst_set_var(f.body, f.var, HFLiteral(index_set))
            if not alpha_eq(line.formula, expected):
                return _reject(
                    no, ReasonCode.BAD_INDEX_SET, "line is not the premise at this index set"
                )
        case EL2(premise, _):
            f = cited(premise)
            if f is None:
                return _reject(no, ReasonCode.BAD_CITATION, "cited line missing or not earlier")
            if not isinstance(f, ForallFamily):
                return _reject(no, ReasonCode.NOT_LITERAL, "premise is not a family binder")
            try:
                expected = subst_family(f, f.family, just.mapping())
            except AssignmentDomainError as exc:
                return _reject(no, ReasonCode.ASSIGNMENT_DOMAIN, str(exc))
            except NotLiteralError as exc:
                return _reject(no, ReasonCode.NOT_LITERAL, str(exc))
            except SubstitutionError as exc:
                return _reject(no, ReasonCode.ASSIGNMENT_DOMAIN, str(exc))
            if not alpha_eq(line.formula, expected):
                return _reject(
                    no, ReasonCode.BAD_WITNESS, "line is not the instantiated family binder"
                )
        case Expand(premise):
            f = cited(premise)
            if f is None:
                return _reject(no, ReasonCode.BAD_CITATION, "cited line missing or not earlier")
            if not alpha_eq(line.formula, expand_index_quantifiers(f)):
                return _reject(
                    no, ReasonCode.BAD_EXPAND, "line is not the enumerated premise"
                )
        case _:
            return _reject(no, ReasonCode.BAD_CITATION, f"unknown justification {just!r}")
    return None


# ---------------------------------------------------------------------------
# Script files


def parse_proof_script(text: str) -> ProofScript:
    """Parse a .fastproof file: numbered lines `<n> <formula> ; <rule>`,
    terminated by `qed <n>`."""
    lines: list[ProofLine] = []
    goal: Optional[Formula] = None
    saw_qed = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if saw_qed:
            raise ParseError(f"content after qed on line {lineno}", SourceSpan(0, len(raw)))
        if stripped.startswith("qed"):
            parts = stripped.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(f"bad qed on line {lineno}", SourceSpan(0, len(raw)))
            target = int(parts[1])
            for pl in lines:
                if pl.line_no == target:
                    goal = pl.formula
                    break
            if goal is None:
                raise ParseError(
                    f"qed cites unknown line {target} (line {lineno})", SourceSpan(0, len(raw))
                )
            saw_qed = True
            continue
        head, sep, rest = stripped.partition(";")
        if not sep:
            raise ParseError(f"missing ';' on line {lineno}", SourceSpan(0, len(raw)))
        head_parts = head.strip().split(None, 1)
        if len(head_parts) != 2 or not head_parts[0].isdigit():
            raise ParseError(
                f"expected '<n> <formula>' on line {lineno}", SourceSpan(0, len(raw))
            )
        no = int(head_parts[0])
        try:
            formula = parse_formula(head_parts[1])
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc.message}", exc.span) from None
        just = _parse_justification(rest.strip(), lineno)
        lines.append(ProofLine(no, formula, just))
    if not saw_qed or goal is None:
        raise ParseError("script has no qed line", SourceSpan(0, len(text)))
    return ProofScript(tuple(lines), goal)


def load_proof_script(path) -> ProofScript:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_proof_script(fh.read())


def _parse_justification(text: str, lineno: int) -> Justification:
    toks = tokenize(text)

    def fail(msg: str) -> ParseError:
        return ParseError(f"line {lineno}: {msg}", SourceSpan(0, max(1, len(text))))

    def tok(i: int):
        return toks[i] if i < len(toks) else toks[-1]

    def need_num(i: int) -> int:
        if tok(i).kind != "NUM":
            raise fail(f"expected a line number in {text!r}")
        return int(tok(i).text)

    kind = tok(0).kind
    if kind == "KW_axiom":
        if tok(1).kind != "NAME" or tok(2).kind != "EOF":
            raise fail("expected: axiom <NAME>")
        try:
            return Axiom(AxiomName(tok(1).text))
        except ValueError:
            raise fail(f"unknown axiom {tok(1).text!r}") from None
    if kind == "KW_mp":
        if tok(3).kind != "EOF":
            raise fail("expected: mp <major> <minor>")
        return MP(need_num(1), need_num(2))
    if kind == "KW_taut":
        nums = []
        i = 1
        while tok(i).kind == "NUM":
            nums.append(int(tok(i).text))
            i += 1
        if tok(i).kind != "EOF":
            raise fail("expected: taut <n> ...")
        return Taut(tuple(nums))
    if kind == "KW_ui":
        n = need_num(1)
        term, j = _parse_arg_term(toks, 2, fail)
        if tok(j).kind != "EOF":
            raise fail("trailing input after ui witness")
        return UI(n, term)
    if kind == "KW_ug":
        if tok(1).kind != "NUM" or tok(2).kind != "NAME" or tok(3).kind != "EOF":
            raise fail("expected: ug <n> <var>")
        return UG(int(tok(1).text), tok(2).text)
    if kind == "KW_el1":
        n = need_num(1)
        value, j = _parse_arg_literal(toks, 2, fail)
        if tok(j).kind != "EOF":
            raise fail("trailing input after el1 index set")
        return EL1(n, value)
    if kind == "KW_el2":
        n = need_num(1)
        if tok(2).kind != "[":
            raise fail("expected: el2 <n> [<lit> -> <term>, ...]")
        i = 3
        pairs: list[tuple[HFSet, Term]] = []
        if tok(i).kind != "]":
            while True:
                label, i = _parse_arg_literal(toks, i, fail)
                if tok(i).kind != "->":
                    raise fail("expected '->' in el2 assignment")
                target, i = _parse_arg_term(toks, i + 1, fail)
                pairs.append((label, target))
                if tok(i).kind == ",":
                    i += 1
                    continue
                break
        if tok(i).kind != "]":
            raise fail("expected ']' closing el2 assignment")
        if tok(i + 1).kind != "EOF":
            raise fail("trailing input after el2 assignment")
        return EL2(n, tuple(pairs))
    if kind == "KW_expand":
        if tok(2).kind != "EOF":
            raise fail("expected: expand <n>")
        return Expand(need_num(1))
    raise fail(f"unknown rule {tok(0).text!r}")


def _parse_arg_literal(toks, i, fail):
    from .hf import canonical, zermelo_numeral

    t = toks[i]
    if t.kind == "NUM":
        return zermelo_numeral(int(t.text)), i + 1
    if t.kind == "{":
        elems = []
        i += 1
        if toks[i].kind != "}":
            while True:
                value, i = _parse_arg_literal(toks, i, fail)
                elems.append(value)
                if toks[i].kind == ",":
                    i += 1
                    continue
                break
        if toks[i].kind != "}":
            raise fail("unbalanced braces in literal")
        return canonical(elems), i + 1
    raise fail("expected a set literal")


def _parse_arg_term(toks, i, fail):
    t = toks[i]
    if t.kind == "NAME":
        return SetVar(t.text), i + 1
    value, j = _parse_arg_literal(toks, i, fail)
    return HFLiteral(value), j


# ---------------------------------------------------------------------------
# Randomized local soundness of the inference rules.
#
# "True in a model" means true under every assignment of the free
# variables, which is the sense in which generalization is sound.


@dataclass
class SoundnessReport:
    rule: str
    trials: int
    attempts: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


_RULES = ("mp", "taut", "ui", "ug", "el1", "el2", "expand")


def _valid_in(model: Model, phi: Formula) -> bool:
    fv = sorted(free_vars(phi))
    carrier = model.carrier if isinstance(model, RankUniverse) else model.nodes
    if not fv:
        return eval_formula(model, Env(), phi)
    for values in product(carrier, repeat=len(fv)):
        if not eval_formula(model, Env(set_vars=dict(zip(fv, values))), phi):
            return False
    return True


def _sample_models(rng: random.Random, max_universe: int) -> list[Model]:
    models: list[Model] = [RankUniverse(k) for k in range(1, max_universe + 1)]
    for n in range(1, min(max_universe, 3) + 1):
        nodes = tuple("abcd"[:n])
        pairs = [(x, y) for x in nodes for y in nodes]
        for _ in range(3):
            edges = frozenset(p for p in pairs if rng.random() < 0.4)
            models.append(Digraph(nodes, edges))
    return models


def _rand_prop(rng: random.Random, depth: int, atoms: list[Formula]) -> Formula:
    if depth <= 0 or rng.random() < 0.3:
        return rng.choice(atoms)
    kind = rng.randrange(5)
    if kind == 0:
        return Not(_rand_prop(rng, depth - 1, atoms))
    cons = (And, Or, Implies, Iff)[kind - 1]
    return cons(_rand_prop(rng, depth - 1, atoms), _rand_prop(rng, depth - 1, atoms))


_BASE_ATOMS = (
    "a in b",
    "b in a",
    "a = b",
    "a in a",
    "E w . w in a",
    "A w . (w in a -> w in b)",
)

_VALID_POOL = (
    "a = a",
    "a in b \\/ ~ a in b",
    "a in b -> a in b",
    "A w . w = w",
    "~ (a = b /\\ ~ a = b)",
)

_EL_BODIES = (
    "A i in X . u[i] = u[i]",
    "E Z . A y . (y in Z <-> E i in X . y = u[i])",
    "A i in X . E w . (u[i] in w \\/ ~ u[i] in w)",
    "~ E i in X . ~ u[i] = u[i]",
)


def _sample_index_literal(rng: random.Random, model: Model) -> Optional[HFSet]:
    """A constant index set naming an element of the model: any carrier
    element in a rank universe, an embeddable literal in a digraph (None
    when the sampled candidate does not denote there)."""
    if isinstance(model, RankUniverse):
        carrier = model.carrier
        if not carrier:
            return None
        return rng.choice(carrier)
    from .hf import canonical
    from .semantics import UndenotableLiteralError, embed_literal

    pool = v_universe(2)
    candidate = canonical(rng.sample(pool, rng.randrange(3)))
    try:
        embed_literal(model, candidate)
    except UndenotableLiteralError:
        return None
    return candidate


def rule_local_soundness(
    rule: str, trials: int = 200, max_universe: int = 3, seed: int = 0
) -> SoundnessReport:
    """Randomized check that a rule never leads from premises that hold in
    a model to a conclusion that fails in it.  Counts only instances whose
    premises hold; reports every violation found."""
    rule = rule.lower()
    if rule not in _RULES:
        raise ValueError(f"unknown rule {rule!r}; one of {_RULES}")
    rng = random.Random(seed)
    models = _sample_models(rng, max_universe)
    atoms = [parse_formula(s) for s in _BASE_ATOMS]
    valid_pool = [parse_formula(s) for s in _VALID_POOL]
    el_bodies = [parse_formula(f"A X . fam u[i] in X . ({s})") for s in _EL_BODIES]
    report = SoundnessReport(rule, 0, 0)
    max_attempts = max(trials * 40, 400)

    while report.trials < trials and report.attempts < max_attempts:
        report.attempts += 1
        model = rng.choice(models)
        is_rank = isinstance(model, RankUniverse)
        try:
            premises: list[Formula]
            conclusion: Formula
            if rule == "mp":
                a = rng.choice(valid_pool)
                b = (
                    _rand_prop(rng, 2, atoms)
                    if rng.random() < 0.5
                    else rng.choice((a, Or(a, _rand_prop(rng, 1, atoms))))
                )
                premises, conclusion = [Implies(a, b), a], b
            elif rule == "taut":
                premises = [rng.choice(valid_pool) for _ in range(rng.randrange(3))]
                conclusion = _rand_prop(rng, 2, atoms)
                if not propositional_consequence(premises, conclusion):
                    continue
            elif rule == "ui":
                body = _rand_prop(rng, 2, atoms)
                var = rng.choice(("a", "b"))
                premise = Forall(var, body)
                if is_rank and model.carrier and rng.random() < 0.5:
                    witness: Term = HFLiteral(rng.choice(model.carrier))
                else:
                    witness = SetVar(rng.choice(("a", "b")))
                premises, conclusion = [premise], subst_set_var(body, var, witness)
            elif rule == "ug":
                body = _rand_prop(rng, 2, atoms)
                var = rng.choice(("a", "b", "c"))
                premises, conclusion = [body], Forall(var, body)
            elif rule == "el1":
                premise = rng.choice(el_bodies)
                lit = _sample_index_literal(rng, model)
                if lit is None:
                    continue
                assert isinstance(premise, Forall)
                premises = [premise]
                conclusion = subst_set_var(premise.body, premise.var, HFLiteral(lit))
            elif rule == "el2":
                shaped = rng.choice(el_bodies)
                assert isinstance(shaped, Forall)
                lit = _sample_index_literal(rng, model)
                if lit is None:
                    continue
                fam = subst_set_var(shaped.body, shaped.var, HFLiteral(lit))
                assert isinstance(fam, ForallFamily)
                assignment = {}
                for c in lit.elements:
                    if is_rank and rng.random() < 0.5:
                        assignment[c] = HFLiteral(rng.choice(model.carrier))
                    else:
                        assignment[c] = SetVar(rng.choice(("a", "b")))
                premises = [fam]
                conclusion = subst_family(fam, fam.family, assignment)
            else:  # expand: a pure equivalence, no denotation side condition
                from .hf import canonical

                shaped = rng.choice(el_bodies)
                assert isinstance(shaped, Forall)
                lit = canonical(rng.sample(v_universe(2), rng.randrange(3)))
                premise = subst_set_var(shaped.body, shaped.var, HFLiteral(lit))
                premises = [premise]
                conclusion = expand_index_quantifiers(premise)

            if not all(_valid_in(model, p) for p in premises):
                continue
            report.trials += 1
            if not _valid_in(model, conclusion):
                report.violations.append(
                    {
                        "model": model,
                        "premises": [print_formula(p) for p in premises],
                        "conclusion": print_formula(conclusion),
                    }
                )
        except EvalError:
            continue
    return report
