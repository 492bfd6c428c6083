import pytest

from fastset.hf import (
    as_numeral,
    canonical,
    empty_set,
    hf_text,
    rank,
    v_universe,
    zermelo_numeral,
)


def test_canonical_dedup():
    assert canonical([empty_set, empty_set]) is canonical([empty_set])


def test_canonical_order_independent():
    one = zermelo_numeral(1)
    assert canonical([one, empty_set]) is canonical([empty_set, one])


def test_canonical_empty():
    assert canonical([]) is empty_set


def test_canonical_order_rank_first():
    one = zermelo_numeral(1)
    pair = canonical([one, empty_set])
    assert pair.elements == (empty_set, one)


def test_rank():
    assert rank(empty_set) == 0
    assert rank(canonical([empty_set, zermelo_numeral(1)])) == 2
    assert rank(zermelo_numeral(3)) == 3


@pytest.mark.parametrize("n", range(8))
def test_rank_of_numeral_by_unfolding(n):
    # independent check: peel the successor n times by hand
    x = zermelo_numeral(n)
    steps = 0
    while x.elements:
        assert len(x.elements) == 1
        x = x.elements[0]
        steps += 1
    assert steps == n
    assert rank(zermelo_numeral(n)) == n


def test_zermelo_numerals():
    assert zermelo_numeral(0) is empty_set
    assert zermelo_numeral(1) is canonical([empty_set])
    assert zermelo_numeral(2) is canonical([canonical([empty_set])])
    assert as_numeral(zermelo_numeral(7)) == 7
    assert as_numeral(canonical([empty_set, zermelo_numeral(1)])) is None


def test_v_universe_small():
    assert v_universe(0) == ()
    assert v_universe(1) == (empty_set,)
    assert len(v_universe(3)) == 4
    assert set(v_universe(3)) == {
        empty_set,
        zermelo_numeral(1),
        zermelo_numeral(2),
        canonical([empty_set, zermelo_numeral(1)]),
    }
    assert len(v_universe(4)) == 16


def test_v_universe_doubling():
    for k in range(4):
        assert len(v_universe(k + 1)) == 2 ** len(v_universe(k))


def test_v_universe_guard():
    with pytest.raises(ValueError):
        v_universe(6)
    with pytest.raises(ValueError):
        v_universe(-1)


def test_v_universe_transitive():
    for k in range(5):
        carrier = set(v_universe(k))
        for x in carrier:
            for e in x.elements:
                assert e in carrier


def test_extensionality_of_values():
    a = canonical([zermelo_numeral(2), empty_set])
    b = canonical([empty_set, zermelo_numeral(2)])
    assert a is b and a.elements == b.elements


def test_hf_text():
    assert hf_text(empty_set) == "0"
    assert hf_text(zermelo_numeral(2)) == "2"
    assert hf_text(canonical([empty_set, zermelo_numeral(1)])) == "{0, 1}"
    nested = canonical([canonical([empty_set, zermelo_numeral(1)]), empty_set])
    assert hf_text(nested) == "{0, {0, 1}}"


def test_deep_numeral_is_iterative():
    big = zermelo_numeral(5000)
    assert rank(big) == 5000
    assert as_numeral(big) == 5000
