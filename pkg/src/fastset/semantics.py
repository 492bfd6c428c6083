"""Brute-force Tarskian evaluation over finite models.

Two model kinds share the evaluator: rank-truncated universes (the sets
of rank < k with real membership) and finite digraphs whose edge relation
a -> b is read as "a is a member of b".  The family binder quantifies
over every total mapping from the members of the index set to the
carrier; evaluation is exhaustive, with a configurable budget on the
number of environment extensions so that a too-large query fails loudly
instead of silently truncating.

Index-set denotation: when the index set of a binder is a literal, its
elements serve directly as index labels (so literal-indexed families are
meaningful in every model); a literal in a value position of a digraph
model must embed at a unique node, otherwise evaluation errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Mapping, Optional, Union

from .axioms import AxiomName, axiom_formula
from .hf import HFSet, v_universe
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
    IllFormedError,
    Implies,
    IndexConst,
    IndexVar,
    Mem,
    Not,
    Or,
    SetVar,
    Term,
    free_vars,
    well_formed,
)

__all__ = [
    "RankUniverse",
    "Digraph",
    "Model",
    "Env",
    "EvalStats",
    "EvalError",
    "UndenotableLiteralError",
    "UnboundVariableError",
    "FamilyDomainError",
    "BudgetExceededError",
    "DEFAULT_BUDGET",
    "eval_formula",
    "check_axioms",
    "check_scheme_instance",
    "find_countermodel",
    "embed_literal",
    "parse_model_spec",
    "model_spec_text",
    "all_digraphs",
]

DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class RankUniverse:
    """All sets of rank < k under real membership."""

    k: int

    @property
    def carrier(self) -> tuple[HFSet, ...]:
        return v_universe(self.k)

    def __repr__(self) -> str:
        return f"RankUniverse(k={self.k})"


@dataclass(frozen=True)
class Digraph:
    """Finite carrier of named nodes; an edge (a, b) means a is in b."""

    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate node ids")
        for a, b in self.edges:
            if a not in self.nodes or b not in self.nodes:
                raise ValueError(f"edge ({a}, {b}) mentions an unknown node")

    def predecessors(self, node: str) -> frozenset[str]:
        return frozenset(a for a, b in self.edges if b == node)

    def is_acyclic(self) -> bool:
        color: dict[str, int] = {}

        def dfs(v: str) -> bool:
            color[v] = 1
            for a, b in self.edges:
                if a != v:
                    continue
                st = color.get(b, 0)
                if st == 1 or (st == 0 and dfs(b)):
                    return True
            color[v] = 2
            return False

        return not any(color.get(v, 0) == 0 and dfs(v) for v in self.nodes)


Model = Union[RankUniverse, Digraph]


@dataclass(frozen=True)
class Env:
    """Variable assignment: set variables and index variables map to model
    elements; families map to finite mappings from index labels to model
    elements."""

    set_vars: Mapping[str, object] = field(default_factory=dict)
    index_vars: Mapping[str, object] = field(default_factory=dict)
    families: Mapping[str, Mapping[object, object]] = field(default_factory=dict)


@dataclass
class EvalStats:
    extensions: int = 0
    family_mappings: int = 0


class EvalError(Exception):
    pass


class UndenotableLiteralError(EvalError):
    pass


class UnboundVariableError(EvalError):
    pass


class FamilyDomainError(EvalError):
    pass


class BudgetExceededError(EvalError):
    def __init__(self, extensions: int):
        super().__init__(f"enumeration budget exceeded after {extensions} environment extensions")
        self.extensions = extensions


_MISSING = object()


def _idx_key(name: str) -> str:
    return name + "\ti"


def _fam_key(name: str) -> str:
    return name + "\tf"


class _Machine:
    """Compiles a formula into nested closures over one mutable environment
    dict; quantifier loops tick the shared budget cell."""

    def __init__(self, model: Model, budget: Optional[int], stats: EvalStats):
        self.model = model
        self.stats = stats
        self.cell = [0]
        self.limit = budget if budget is not None else math.inf
        if isinstance(model, RankUniverse):
            self.is_rank = True
            self.carrier: tuple = model.carrier
        elif isinstance(model, Digraph):
            self.is_rank = False
            self.carrier = model.nodes
            order = {v: i for i, v in enumerate(model.nodes)}
            self.preds = {
                v: frozenset(a for a, b in model.edges if b == v) for v in model.nodes
            }
            self.preds_sorted = {
                v: tuple(sorted(self.preds[v], key=order.__getitem__)) for v in model.nodes
            }
            self._embed_memo: dict[HFSet, str] = {}
        else:
            raise TypeError(f"not a model: {model!r}")

    # -- value helpers ----------------------------------------------------

    def embed(self, h: HFSet) -> str:
        """The unique digraph node whose membership structure matches the
        literal, or an error."""
        memo = self._embed_memo
        if h in memo:
            return memo[h]
        member_nodes = frozenset(self.embed(e) for e in h.elements)
        matches = [v for v in self.model.nodes if self.preds[v] == member_nodes]
        if len(matches) != 1:
            raise UndenotableLiteralError(
                f"literal {h!r} does not embed at a unique node "
                f"({len(matches)} candidates)"
            )
        memo[h] = matches[0]
        return matches[0]

    def members_of(self, value) -> tuple:
        if self.is_rank:
            return value.elements
        return self.preds_sorted[value]

    def index_labels(self, index_set: Term) -> Optional[tuple]:
        """Static labels when the index set is a literal (elements act as
        abstract labels in every model kind)."""
        if isinstance(index_set, HFLiteral):
            return index_set.value.elements
        return None

    # -- compilation ------------------------------------------------------

    def compile_term(self, t: Term) -> Callable[[dict], object]:
        match t:
            case SetVar(name):
                def var_fn(env, _n=name):
                    try:
                        return env[_n]
                    except KeyError:
                        raise UnboundVariableError(f"set variable {_n!r} is not assigned") from None

                return var_fn
            case HFLiteral(value):
                if self.is_rank:
                    return lambda env, _v=value: _v
                node = self.embed(value)
                return lambda env, _v=node: _v
            case FamilyApp(family, IndexConst(value)):
                fkey = _fam_key(family)
                is_rank = self.is_rank

                def const_app(env, _f=fkey, _c=value):
                    try:
                        mapping = env[_f]
                    except KeyError:
                        raise UnboundVariableError(
                            f"family {family!r} is not assigned"
                        ) from None
                    if _c in mapping:
                        return mapping[_c]
                    if not is_rank:
                        node = self.embed(_c)
                        if node in mapping:
                            return mapping[node]
                    raise FamilyDomainError(
                        f"label {_c!r} lies outside the domain of family {family!r}"
                    )

                return const_app
            case FamilyApp(family, IndexVar(iname)):
                fkey = _fam_key(family)
                ikey = _idx_key(iname)

                def var_app(env, _f=fkey, _i=ikey):
                    try:
                        mapping = env[_f]
                    except KeyError:
                        raise UnboundVariableError(
                            f"family {family!r} is not assigned"
                        ) from None
                    try:
                        label = env[_i]
                    except KeyError:
                        raise UnboundVariableError(
                            f"index variable {iname!r} is not assigned"
                        ) from None
                    try:
                        return mapping[label]
                    except KeyError:
                        raise FamilyDomainError(
                            f"label {label!r} lies outside the domain of family {family!r}"
                        ) from None

                return var_app
        raise TypeError(f"not a term: {t!r}")

    def compile(self, phi: Formula) -> Callable[[dict], bool]:
        match phi:
            case Mem(lhs, rhs):
                lf, rf = self.compile_term(lhs), self.compile_term(rhs)
                if self.is_rank:
                    return lambda env: lf(env) in rf(env).element_set
                preds = self.preds
                return lambda env: lf(env) in preds[rf(env)]
            case Eq(lhs, rhs):
                lf, rf = self.compile_term(lhs), self.compile_term(rhs)
                return lambda env: lf(env) == rf(env)
            case Not(body):
                bf = self.compile(body)
                return lambda env: not bf(env)
            case And(lhs, rhs):
                lf, rf = self.compile(lhs), self.compile(rhs)
                return lambda env: lf(env) and rf(env)
            case Or(lhs, rhs):
                lf, rf = self.compile(lhs), self.compile(rhs)
                return lambda env: lf(env) or rf(env)
            case Implies(lhs, rhs):
                lf, rf = self.compile(lhs), self.compile(rhs)
                return lambda env: rf(env) if lf(env) else True
            case Iff(lhs, rhs):
                lf, rf = self.compile(lhs), self.compile(rhs)
                return lambda env: lf(env) == rf(env)
            case Forall(var, body):
                return self._quant(var, body, True)
            case Exists(var, body):
                return self._quant(var, body, False)
            case ForallFamily(family, _, index_set, body):
                return self._family_quant(family, index_set, body)
            case ExistsIndex(index_var, index_set, body):
                return self._index_quant(index_var, index_set, body, False)
            case ForallIndex(index_var, index_set, body):
                return self._index_quant(index_var, index_set, body, True)
        raise TypeError(f"not a formula: {phi!r}")

    def _quant(self, var: str, body: Formula, universal: bool) -> Callable[[dict], bool]:
        bf = self.compile(body)
        carrier = self.carrier
        cell = self.cell
        limit = self.limit

        def run(env):
            old = env.get(var, _MISSING)
            try:
                for value in carrier:
                    cell[0] += 1
                    if cell[0] > limit:
                        raise BudgetExceededError(cell[0])
                    env[var] = value
                    if bf(env) is not universal:
                        return not universal
                return universal
            finally:
                if old is _MISSING:
                    env.pop(var, None)
                else:
                    env[var] = old

        return run

    def _family_quant(self, family: str, index_set: Term, body: Formula) -> Callable[[dict], bool]:
        bf = self.compile(body)
        fkey = _fam_key(family)
        carrier = self.carrier
        cell = self.cell
        limit = self.limit
        stats = self.stats
        static = self.index_labels(index_set)
        set_fn = None if static is not None else self.compile_term(index_set)

        def run(env):
            labels = static if static is not None else self.members_of(set_fn(env))
            old = env.get(fkey, _MISSING)
            try:
                for values in product(carrier, repeat=len(labels)):
                    cell[0] += 1
                    stats.family_mappings += 1
                    if cell[0] > limit:
                        raise BudgetExceededError(cell[0])
                    env[fkey] = dict(zip(labels, values))
                    if not bf(env):
                        return False
                return True
            finally:
                if old is _MISSING:
                    env.pop(fkey, None)
                else:
                    env[fkey] = old

        return run

    def _index_quant(
        self, index_var: str, index_set: Term, body: Formula, universal: bool
    ) -> Callable[[dict], bool]:
        bf = self.compile(body)
        ikey = _idx_key(index_var)
        cell = self.cell
        limit = self.limit
        static = self.index_labels(index_set)
        set_fn = None if static is not None else self.compile_term(index_set)

        def run(env):
            labels = static if static is not None else self.members_of(set_fn(env))
            old = env.get(ikey, _MISSING)
            try:
                for label in labels:
                    cell[0] += 1
                    if cell[0] > limit:
                        raise BudgetExceededError(cell[0])
                    env[ikey] = label
                    if bf(env) is not universal:
                        return not universal
                return universal
            finally:
                if old is _MISSING:
                    env.pop(ikey, None)
                else:
                    env[ikey] = old

        return run


def _env_dict(model: Model, env: Env, machine: _Machine) -> dict:
    carrier = set(machine.carrier)
    out: dict = {}
    for name, value in env.set_vars.items():
        if value not in carrier:
            raise UnboundVariableError(f"value for {name!r} is not a model element")
        out[name] = value
    for name, value in env.index_vars.items():
        out[_idx_key(name)] = value
    for name, mapping in env.families.items():
        out[_fam_key(name)] = dict(mapping)
    return out


def eval_formula(
    model: Model,
    env: Env,
    phi: Formula,
    *,
    budget: Optional[int] = DEFAULT_BUDGET,
    stats: Optional[EvalStats] = None,
) -> bool:
    """Exact truth value of phi in the model under env, by exhaustive
    enumeration.  Raises BudgetExceededError when the number of
    environment extensions passes the budget."""
    diag = well_formed(phi)
    if not diag:
        raise IllFormedError(diag.reason)
    stats = stats if stats is not None else EvalStats()
    machine = _Machine(model, budget, stats)
    missing = free_vars(phi) - set(env.set_vars.keys())
    if missing:
        raise UnboundVariableError(
            f"environment does not cover free variables: {', '.join(sorted(missing))}"
        )
    compiled = machine.compile(phi)
    try:
        return compiled(_env_dict(model, env, machine))
    finally:
        stats.extensions += machine.cell[0]


def check_axioms(
    model: Model, *, budget: Optional[int] = DEFAULT_BUDGET
) -> dict[AxiomName, bool]:
    """Truth vector of all eleven axioms in the model."""
    return {
        name: eval_formula(model, Env(), axiom_formula(name), budget=budget)
        for name in AxiomName
    }


def check_scheme_instance(
    model: Model, instance: Formula, *, budget: Optional[int] = DEFAULT_BUDGET
) -> bool:
    """Evaluate a closed scheme instance."""
    fv = free_vars(instance)
    if fv:
        raise UnboundVariableError(
            f"scheme instance is not closed: free {', '.join(sorted(fv))}"
        )
    return eval_formula(model, Env(), instance, budget=budget)


# ---------------------------------------------------------------------------
# Countermodel search

_NODE_NAMES = ("a", "b", "c", "d")


def all_digraphs(max_nodes: int, min_nodes: int = 0):
    """Every labeled digraph with min_nodes..max_nodes nodes, in the
    canonical enumeration order (node count, then edge bitmask)."""
    for n in range(min_nodes, max_nodes + 1):
        nodes = _NODE_NAMES[:n]
        pairs = [(x, y) for x in nodes for y in nodes]
        for mask in range(1 << len(pairs)):
            edges = frozenset(p for i, p in enumerate(pairs) if mask >> i & 1)
            yield Digraph(nodes, edges)


def find_countermodel(
    phi: Formula, max_nodes: int, *, budget: Optional[int] = DEFAULT_BUDGET
) -> Optional[Digraph]:
    """Smallest digraph model falsifying phi (node count first, then edge
    bitmask order), or None.  Open formulas are universally closed first;
    models where a literal fails to denote are skipped."""
    if max_nodes > 4:
        raise ValueError("countermodel search is guarded at 4 nodes")
    closed = phi
    for name in sorted(free_vars(phi), reverse=True):
        closed = Forall(name, closed)
    for model in all_digraphs(max_nodes):
        try:
            if not eval_formula(model, Env(), closed, budget=budget):
                return model
        except UndenotableLiteralError:
            continue
    return None


# ---------------------------------------------------------------------------
# Model spec files


def embed_literal(model: Digraph, value: HFSet) -> str:
    """The unique node of a digraph whose membership structure matches the
    literal; raises UndenotableLiteralError otherwise."""
    return _Machine(model, None, EvalStats()).embed(value)


def parse_model_spec(text: str) -> Model:
    """Parse a model description: either `vrank <k>` or `digraph` followed
    by `node <id>` and `edge <a> <b>` lines; '#' starts a comment."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ValueError("empty model spec")
    head = lines[0].split()
    if head[0] == "vrank":
        if len(head) != 2 or not head[1].isdigit() or len(lines) > 1:
            raise ValueError("vrank spec must be a single line: vrank <k>")
        return RankUniverse(int(head[1]))
    if head[0] == "digraph":
        if len(head) != 1:
            raise ValueError("digraph header takes no arguments")
        nodes: list[str] = []
        edges: set[tuple[str, str]] = set()
        for line in lines[1:]:
            parts = line.split()
            if parts[0] == "node" and len(parts) == 2:
                nodes.append(parts[1])
            elif parts[0] == "edge" and len(parts) == 3:
                edges.add((parts[1], parts[2]))
            else:
                raise ValueError(f"bad model spec line: {line!r}")
        return Digraph(tuple(nodes), frozenset(edges))
    raise ValueError(f"unknown model kind: {head[0]!r}")


def model_spec_text(model: Model) -> str:
    if isinstance(model, RankUniverse):
        return f"vrank {model.k}"
    order = {v: i for i, v in enumerate(model.nodes)}
    lines = ["digraph"]
    lines += [f"node {v}" for v in model.nodes]
    lines += [
        f"edge {a} {b}"
        for a, b in sorted(model.edges, key=lambda e: (order[e[0]], order[e[1]]))
    ]
    return "\n".join(lines)
