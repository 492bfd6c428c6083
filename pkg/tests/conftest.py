import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).parent
REPO = TESTS.parent
sys.path.insert(0, str(TESTS))

from fastset.axioms import AxiomName, axiom_formula, no_universal_set
from fastset.parser import print_formula


CORPUS_TEXTS = [
    "a in b",
    "a = b",
    "~ a = a",
    "a in b /\\ (c in d \\/ e in f)",
    "a in b -> b in c -> c in a",
    "a = b <-> b = a",
    "A x . x = x",
    "E x . (x in W1 /\\ ~ x = W1)",
    "A x . (E y . y in x -> E y . (y in x /\\ ~ E z . (z in y /\\ z in x)))",
    "0 = {}",
    "{0, 1} in W1",
    "{0, {0, 1}} = {{0}, 2}",
    "fam u[i] in {0, 1} . E Z . A y . (y in Z <-> E i in {0, 1} . y = u[i])",
    "fam u[i] in X . (u[2] = u[2] -> E i in X . y = u[i])",
    "A X . fam u[i] in X . A i in X . (u[i] in X \\/ ~ u[i] in X)",
    "fam u[i] in 0 . E Z . A y . (y in Z <-> E i in 0 . y = u[i])",
]


def corpus_formulas():
    """Parsed corpus: hand-written texts, the eleven axioms, the shipped
    proof formulas, and the expander corpus files."""
    from fastset.kernel import load_proof_script
    from fastset.parser import parse_formula

    out = [parse_formula(s) for s in CORPUS_TEXTS]
    out += [axiom_formula(name) for name in AxiomName]
    out.append(no_universal_set())
    for path in sorted((TESTS / "data" / "expander").glob("*.fast")):
        out.append(parse_formula(path.read_text()))
    for name in ("pair", "singleton"):
        script = load_proof_script(REPO / "proofs" / f"{name}.fastproof")
        out += [line.formula for line in script.lines]
    return out


@pytest.fixture(scope="session")
def corpus():
    return corpus_formulas()


@pytest.fixture(scope="session")
def corpus_texts():
    return [print_formula(phi) for phi in corpus_formulas()]
