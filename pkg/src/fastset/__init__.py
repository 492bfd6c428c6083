"""fastset: a toolkit for Finitely Axiomatized Set Theory (FAST).

Parse the extended first-order language with the family quantifier,
check Hilbert-style proof scripts against the eleven axioms, and
evaluate formulas over finite models by exhaustive enumeration.
"""

__version__ = "0.1.0"

from .axioms import (
    AxiomName,
    axiom_formula,
    main_instance,
    no_universal_set,
    sep_instance,
    sub_instance,
)
from .expander import expand_finite_family, expand_index_quantifiers
from .hf import HFSet, canonical, rank, v_universe, zermelo_numeral
from .kernel import ProofLine, ProofScript, Verdict, check_proof, parse_proof_script
from .parser import ParseError, parse_formula, print_formula
from .semantics import (
    Digraph,
    Env,
    RankUniverse,
    check_axioms,
    check_scheme_instance,
    eval_formula,
    find_countermodel,
)
from .syntax import alpha_eq, free_vars, subst_family, subst_set_var, well_formed

__all__ = [
    "AxiomName",
    "axiom_formula",
    "main_instance",
    "no_universal_set",
    "sep_instance",
    "sub_instance",
    "expand_finite_family",
    "expand_index_quantifiers",
    "HFSet",
    "canonical",
    "rank",
    "v_universe",
    "zermelo_numeral",
    "ProofLine",
    "ProofScript",
    "Verdict",
    "check_proof",
    "parse_proof_script",
    "ParseError",
    "parse_formula",
    "print_formula",
    "Digraph",
    "Env",
    "RankUniverse",
    "check_axioms",
    "check_scheme_instance",
    "eval_formula",
    "find_countermodel",
    "alpha_eq",
    "free_vars",
    "subst_family",
    "subst_set_var",
    "well_formed",
]
