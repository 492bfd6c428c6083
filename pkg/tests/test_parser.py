import random

import pytest

from fastset.axioms import AxiomName, axiom_formula
from fastset.hf import empty_set
from fastset.parser import ParseError, parse_formula, print_formula, tokenize
from fastset.syntax import (
    And,
    Eq,
    HFLiteral,
    Mem,
    Or,
    SetVar,
    alpha_eq,
    free_vars,
    well_formed,
)

from genfx import FormulaGen

FAM_TEXT = "A X . fam u[i] in X . E Z . A y . (y in Z <-> E i in X . y = u[i])"


def test_parse_fam_axiom():
    assert alpha_eq(parse_formula(FAM_TEXT), axiom_formula(AxiomName.FAM))


def test_fam_axiom_prints_exactly():
    assert print_formula(axiom_formula(AxiomName.FAM)) == FAM_TEXT


def test_parse_zero_brace_sugar():
    assert parse_formula("0 = {}") == Eq(HFLiteral(empty_set), HFLiteral(empty_set))


def test_print_prefers_numerals():
    assert print_formula(Eq(HFLiteral(empty_set), HFLiteral(empty_set))) == "0 = 0"


def test_unbound_family_is_parse_error():
    with pytest.raises(ParseError) as exc:
        parse_formula("u[i] in X")
    assert "not bound" in exc.value.message
    assert exc.value.span.start >= 0 and exc.value.span.end <= len("u[i] in X")


def test_precedence_forces_parens():
    phi = And(
        Mem(SetVar("a"), SetVar("b")),
        Or(Mem(SetVar("c"), SetVar("d")), Mem(SetVar("e"), SetVar("f"))),
    )
    assert print_formula(phi) == "a in b /\\ (c in d \\/ e in f)"


def test_right_associativity():
    assert print_formula(parse_formula("a in b -> b in c -> c in a")) == "a in b -> b in c -> c in a"
    phi = parse_formula("(a in b -> b in c) -> c in a")
    assert print_formula(phi) == "(a in b -> b in c) -> c in a"


def test_quantifier_scope_is_tight():
    phi = parse_formula("A x . x = x /\\ a in b")
    assert isinstance(phi, And)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "a in",
        "a @ b",
        "(a in b",
        "{0, } in a",
        "A . a in b",
        "A in . a in b",
        "E i in X y = u[i]",
        "a in b extra",
        "fam u[i] in X . E i in Y . y = u[i]",  # mismatched index set
    ],
)
def test_parse_errors_have_spans(text):
    with pytest.raises(ParseError) as exc:
        parse_formula(text)
    span = exc.value.span
    assert 0 <= span.start <= span.end <= max(1, len(text.encode("utf-8")))


def test_reserved_words_rejected_as_variables():
    with pytest.raises(ParseError):
        parse_formula("qed in x")


def test_comments_and_whitespace():
    text = "# leading comment\n  A x . x = x   # trailing\n"
    assert print_formula(parse_formula(text)) == "A x . x = x"


def test_non_ascii_byte_spans():
    text = "é in x"  # two UTF-8 bytes for the first char
    with pytest.raises(ParseError) as exc:
        parse_formula(text)
    assert exc.value.span.end <= len(text.encode("utf-8"))


def test_numeral_tokens():
    toks = tokenize("u[2]")
    kinds = [t.kind for t in toks]
    assert kinds == ["NAME", "[", "NUM", "]", "EOF"]


def test_round_trip_corpus(corpus):
    for phi in corpus:
        assert alpha_eq(parse_formula(print_formula(phi)), phi)


def test_round_trip_random_asts():
    rng = random.Random(20250809)
    gen = FormulaGen(rng)
    for _ in range(1000):
        phi = gen.formula(rng.randrange(7))
        assert well_formed(phi), print_formula(phi)
        again = parse_formula(print_formula(phi))
        assert alpha_eq(again, phi)


def test_print_stability(corpus_texts):
    for text in corpus_texts:
        once = print_formula(parse_formula(text))
        twice = print_formula(parse_formula(once))
        assert once == twice


def test_free_vars_survive_round_trip(corpus):
    for phi in corpus:
        assert free_vars(parse_formula(print_formula(phi))) == free_vars(phi)
