import random
from itertools import product

import pytest

from fastset.axioms import AxiomName, axiom_formula, no_universal_set
from fastset.hf import canonical, empty_set, v_universe, zermelo_numeral
from fastset.parser import parse_formula
from fastset.semantics import (
    BudgetExceededError,
    Digraph,
    Env,
    EvalStats,
    FamilyDomainError,
    RankUniverse,
    UnboundVariableError,
    UndenotableLiteralError,
    all_digraphs,
    check_axioms,
    check_scheme_instance,
    eval_formula,
    find_countermodel,
    model_spec_text,
    parse_model_spec,
)
from fastset.syntax import HFLiteral, SetVar, free_vars, subst_set_var

from genfx import FormulaGen

QUINE = Digraph(("q",), frozenset({("q", "q")}))
TWO_LOOSE = Digraph(("a", "b"), frozenset())


def test_el1_instance_false_in_v4():
    phi = parse_formula(
        "fam u[i] in {0, 1} . E Z . A y . (y in Z <-> E i in {0, 1} . y = u[i])"
    )
    assert eval_formula(RankUniverse(4), Env(), phi, budget=10**7) is False


def test_el1_instance_false_in_v4_witness_independent():
    # direct witness check: a family hitting a rank-3 element has no
    # collecting set inside V_4
    carrier = set(v_universe(4))
    rank3 = [x for x in carrier if x.rank == 3]
    values = {rank3[0], empty_set}
    assert canonical(values) not in carrier


def test_el1_instance_empty_index_true_in_v1():
    phi = parse_formula("fam u[i] in 0 . E Z . A y . (y in Z <-> E i in 0 . y = u[i])")
    assert eval_formula(RankUniverse(1), Env(), phi) is True


@pytest.mark.parametrize("model", [RankUniverse(2), RankUniverse(3), QUINE])
def test_inf_false_in_finite_models(model):
    assert eval_formula(model, Env(), axiom_formula(AxiomName.INF), budget=10**8) is False


def test_no_universal_set_true_in_v3():
    assert eval_formula(RankUniverse(3), Env(), no_universal_set(), budget=10**8)


def test_check_axioms_quine_atom():
    report = check_axioms(QUINE)
    assert report[AxiomName.EMPTY] is False
    assert report[AxiomName.REG] is False
    assert report[AxiomName.FAM] is True


def test_check_axioms_two_loose_nodes():
    report = check_axioms(TWO_LOOSE)
    assert report[AxiomName.EXT] is False


def test_eq_is_node_identity_in_digraphs():
    phi = parse_formula("a = b")
    env = Env(set_vars={"a": "a", "b": "b"})
    assert eval_formula(TWO_LOOSE, env, phi) is False


# ---------------------------------------------------------------------------
# countermodels


def test_countermodel_reg_is_quine_atom():
    model = find_countermodel(axiom_formula(AxiomName.REG), 1)
    assert model is not None
    assert len(model.nodes) == 1
    node = model.nodes[0]
    assert model.edges == frozenset({(node, node)})


def test_quine_atom_has_universal_node():
    model = find_countermodel(axiom_formula(AxiomName.REG), 1)
    env = Env(set_vars={"q": model.nodes[0]})
    assert eval_formula(model, env, parse_formula("A y . y in q")) is True


def test_countermodel_validity_returns_none():
    assert find_countermodel(parse_formula("A x . x = x"), 3) is None


def test_countermodel_ext_two_loose_nodes():
    model = find_countermodel(axiom_formula(AxiomName.EXT), 2)
    assert model is not None
    assert len(model.nodes) == 2 and not model.edges


def test_countermodel_guard():
    with pytest.raises(ValueError):
        find_countermodel(parse_formula("A x . x = x"), 5)


# ---------------------------------------------------------------------------
# family enumeration accounting


def test_family_mapping_count_exact():
    stats = EvalStats()
    phi = parse_formula("fam u[i] in {0, 1} . u[0] = u[0]")
    assert eval_formula(RankUniverse(3), Env(), phi, stats=stats) is True
    assert stats.family_mappings == 16  # 4 ** 2


def test_family_mapping_count_empty_index():
    stats = EvalStats()
    phi = parse_formula("fam u[i] in 0 . 0 = 0")
    assert eval_formula(RankUniverse(2), Env(), phi, stats=stats) is True
    assert stats.family_mappings == 1  # the single empty family


@pytest.mark.parametrize(
    "index_set,m",
    [("0", 0), ("1", 1), ("{0, 1}", 2), ("{0, 1, 2}", 3)],
)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_family_mapping_count_is_n_to_the_m(index_set, m, k):
    # a body that never short-circuits inspects exactly n ** m mappings
    stats = EvalStats()
    phi = parse_formula(f"fam u[i] in {index_set} . 0 = 0")
    assert eval_formula(RankUniverse(k), Env(), phi, stats=stats, budget=10**7) is True
    n = len(v_universe(k))
    assert stats.family_mappings == n**m


def test_vacuous_family_law(corpus):
    # over an empty index set the family binder is a no-op for bodies that
    # do not mention the family
    from fastset.syntax import ForallFamily, mentions_family

    lit_empty = HFLiteral(empty_set)
    for phi in corpus:
        if free_vars(phi) or mentions_family(phi, "h0"):
            continue
        wrapped = ForallFamily("h0", "k0", lit_empty, phi)
        for model in (RankUniverse(2), QUINE):
            try:
                plain = eval_formula(model, Env(), phi, budget=10**8)
            except UndenotableLiteralError:
                with pytest.raises(UndenotableLiteralError):
                    eval_formula(model, Env(), wrapped, budget=10**8)
                continue
            assert eval_formula(model, Env(), wrapped, budget=10**8) == plain


# ---------------------------------------------------------------------------
# errors


def test_budget_exceeded():
    phi = parse_formula("A x . A y . A z . x = x")
    with pytest.raises(BudgetExceededError):
        eval_formula(RankUniverse(3), Env(), phi, budget=10)


def test_unbound_variable():
    with pytest.raises(UnboundVariableError):
        eval_formula(RankUniverse(2), Env(), parse_formula("a in b"))


def test_undenotable_literal_in_digraph():
    # the Quine atom has no memberless node, so the empty set cannot embed
    with pytest.raises(UndenotableLiteralError):
        eval_formula(QUINE, Env(), parse_formula("A x . x in 0"))
    # two memberless nodes: the empty set does not embed uniquely
    with pytest.raises(UndenotableLiteralError):
        eval_formula(TWO_LOOSE, Env(), parse_formula("A x . x in 0"))


def test_literal_embeds_in_chain_digraph():
    chain = Digraph(("n0", "n1"), frozenset({("n0", "n1")}))
    assert eval_formula(chain, Env(), parse_formula("0 in 1")) is True


def test_family_domain_error():
    phi = parse_formula("fam u[i] in 1 . u[1] = u[1]")
    with pytest.raises(FamilyDomainError):
        eval_formula(RankUniverse(2), Env(), phi)


def test_unbound_index_var_for_bare_generic():
    phi = parse_formula("fam u[i] in 1 . u[i] = u[i]")
    with pytest.raises(UnboundVariableError):
        eval_formula(RankUniverse(2), Env(), phi)


# ---------------------------------------------------------------------------
# substitution lemma bridge


def test_substitution_lemma_randomized():
    rng = random.Random(20250810)
    gen = FormulaGen(rng, value_literals=False)
    models = [RankUniverse(k) for k in (1, 2, 3)]
    done = 0
    while done < 400:
        phi = gen.formula(rng.randrange(5))
        fv = sorted(free_vars(phi))
        if "W1" not in fv:
            continue
        model = rng.choice(models)
        carrier = model.carrier
        t = SetVar("W2") if rng.random() < 0.5 else HFLiteral(rng.choice(carrier))
        env_vars = {v: rng.choice(carrier) for v in set(fv) | {"W2"}}
        env = Env(set_vars=env_vars)
        value = env_vars["W2"] if isinstance(t, SetVar) else t.value
        updated = Env(set_vars={**env_vars, "W1": value})
        lhs = eval_formula(model, env, subst_set_var(phi, "W1", t), budget=10**7)
        rhs = eval_formula(model, updated, phi, budget=10**7)
        assert lhs == rhs
        done += 1


# ---------------------------------------------------------------------------
# scheme instance evaluation


def test_check_scheme_instance_requires_closed():
    with pytest.raises(UnboundVariableError):
        check_scheme_instance(RankUniverse(2), parse_formula("a = a"))


def test_check_scheme_instance_sep():
    from fastset.axioms import sep_instance

    inst = sep_instance(parse_formula("~ z = z"), "z")
    assert check_scheme_instance(RankUniverse(3), inst, budget=10**8) is True


# ---------------------------------------------------------------------------
# model spec files


def test_model_spec_round_trip():
    text = model_spec_text(QUINE)
    assert text == "digraph\nnode q\nedge q q"
    again = parse_model_spec(text)
    assert again == QUINE
    assert parse_model_spec("vrank 3") == RankUniverse(3)
    assert model_spec_text(RankUniverse(3)) == "vrank 3"


def test_model_spec_rejects_garbage():
    with pytest.raises(ValueError):
        parse_model_spec("pентagram 3")
    with pytest.raises(ValueError):
        parse_model_spec("digraph\nnode a\nedge a z")


def test_all_digraphs_count():
    assert sum(1 for _ in all_digraphs(2)) == 1 + 2 + 16
    assert sum(1 for _ in all_digraphs(3)) == 1 + 2 + 16 + 512


def test_digraph_acyclicity():
    assert TWO_LOOSE.is_acyclic()
    assert not QUINE.is_acyclic()
    chain = Digraph(("a", "b", "c"), frozenset({("a", "b"), ("b", "c")}))
    assert chain.is_acyclic()
    cyc = Digraph(("a", "b"), frozenset({("a", "b"), ("b", "a")}))
    assert not cyc.is_acyclic()


def test_empty_carrier_semantics():
    empty = Digraph((), frozenset())
    assert eval_formula(empty, Env(), parse_formula("A x . ~ x = x")) is True
    assert eval_formula(empty, Env(), parse_formula("E x . x = x")) is False


def test_universal_node_falsifies_reg():
    # Exhaustive over <= 3 nodes.  A universal node Z alone does not defeat
    # REG (witness: a in b, b in b, where X = b still picks the memberless
    # a); it does as soon as the singleton {Z} is present (the instance at
    # that singleton has no disjoint member) or no node is memberless.
    reg = axiom_formula(AxiomName.REG)
    singleton_hits = 0
    no_min_hits = 0
    for model in all_digraphs(3, min_nodes=1):
        universal = [
            z for z in model.nodes if all((y, z) in model.edges for y in model.nodes)
        ]
        if not universal:
            continue
        for z in universal:
            if any(model.predecessors(s) == {z} for s in model.nodes):
                singleton_hits += 1
                assert eval_formula(model, Env(), reg, budget=10**7) is False, model
                break
        if all(model.predecessors(v) for v in model.nodes):
            no_min_hits += 1
            assert eval_formula(model, Env(), reg, budget=10**7) is False, model
    assert singleton_hits > 0 and no_min_hits > 0
