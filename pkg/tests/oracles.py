"""Independent brute-force oracles.

These compute axiom and scheme-instance truth values over rank universes
directly with Python set arithmetic on the real HF sets, without going
through the formula evaluator.  Quantifiers range over the carrier, and
the two-tuple characterization is carrier-restricted: a node p counts as
the tuple <x, y> when its members are exactly {x} plus the unordered pair
{x, y} *if that pair exists in the carrier* (matching what the relational
formula can see).
"""

from __future__ import annotations

from itertools import product

from fastset.hf import HFSet, canonical, empty_set, v_universe


def _cset(carrier):
    return frozenset(carrier)


def is_pair_char(p: HFSet, x: HFSet, y: HFSet, cset) -> bool:
    required = {x}
    upair = canonical([x, y])
    if upair in cset:
        required.add(upair)
    return set(p.elements) == required


def pair_in(f: HFSet, x: HFSet, y: HFSet, cset) -> bool:
    return any(is_pair_char(p, x, y, cset) for p in f.elements)


def is_func(f: HFSet, dom: HFSet, carrier, cset) -> bool:
    for p in f.elements:
        if not any(
            is_pair_char(p, x, y, cset) for x in dom.elements for y in carrier
        ):
            return False
    for x in dom.elements:
        hits = [
            p
            for p in f.elements
            if any(is_pair_char(p, x, y, cset) for y in carrier)
        ]
        if len(hits) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Axioms


def oracle_ext(carrier) -> bool:
    return all(
        x is y
        for x in carrier
        for y in carrier
        if set(x.elements) == set(y.elements)
    )


def oracle_empty(carrier) -> bool:
    return any(not x.elements for x in carrier)


def oracle_sum(carrier) -> bool:
    cset = _cset(carrier)
    return all(
        canonical({z for w in x.elements for z in w.elements}) in cset for x in carrier
    )


def oracle_pow(carrier) -> bool:
    cset = _cset(carrier)
    for x in carrier:
        subs = {z for z in carrier if set(z.elements) <= set(x.elements)}
        if canonical(subs) not in cset:
            return False
    return True


def oracle_inf(carrier) -> bool:
    return any(
        empty_set in x.element_set
        and all(canonical([e]) in x.element_set for e in x.elements)
        for x in carrier
    )


def oracle_reg(carrier) -> bool:
    for x in carrier:
        if not x.elements:
            continue
        if not any(not (set(y.elements) & set(x.elements)) for y in x.elements):
            return False
    return True


def oracle_diff(carrier) -> bool:
    cset = _cset(carrier)
    return all(
        canonical(set(x.elements) - set(y.elements)) in cset
        for x in carrier
        for y in carrier
    )


def oracle_prod(carrier) -> bool:
    cset = _cset(carrier)
    for x_set in carrier:
        for y_set in carrier:
            req = {
                p
                for p in carrier
                if any(
                    is_pair_char(p, x, y, cset)
                    for x in x_set.elements
                    for y in y_set.elements
                )
            }
            if canonical(req) not in cset:
                return False
    return True


def oracle_im(carrier) -> bool:
    cset = _cset(carrier)
    for f in carrier:
        for dom in carrier:
            if not is_func(f, dom, carrier, cset):
                continue
            req = {
                y
                for y in carrier
                if any(pair_in(f, x, y, cset) for x in dom.elements)
            }
            if canonical(req) not in cset:
                return False
    return True


def oracle_rev(carrier) -> bool:
    cset = _cset(carrier)
    for f in carrier:
        for dom in carrier:
            if not is_func(f, dom, carrier, cset):
                continue
            for y in carrier:
                req = {x for x in dom.elements if pair_in(f, x, y, cset)}
                if canonical(req) not in cset:
                    return False
    return True


def oracle_fam(carrier) -> bool:
    cset = _cset(carrier)
    for x_set in carrier:
        labels = x_set.elements
        for values in product(carrier, repeat=len(labels)):
            if canonical(set(values)) not in cset:
                return False
    return True


AXIOM_ORACLES = {
    "EXT": oracle_ext,
    "EMPTY": oracle_empty,
    "SUM": oracle_sum,
    "POW": oracle_pow,
    "INF": oracle_inf,
    "REG": oracle_reg,
    "DIFF": oracle_diff,
    "PROD": oracle_prod,
    "IM": oracle_im,
    "REV": oracle_rev,
    "FAM": oracle_fam,
}


def axiom_truths(k: int) -> dict[str, bool]:
    carrier = v_universe(k)
    return {name: fn(carrier) for name, fn in AXIOM_ORACLES.items()}


# ---------------------------------------------------------------------------
# Scheme instances.  Fixture predicates take real HF sets; extra free
# variables of the parameter are universally quantified over the carrier.


def oracle_sep(carrier, pred, extras: int = 0) -> bool:
    cset = _cset(carrier)
    for extra in product(carrier, repeat=extras):
        for x_set in carrier:
            req = {z for z in x_set.elements if pred(z, *extra)}
            if canonical(req) not in cset:
                return False
    return True


def _functional_on(members, carrier, pred, extra) -> bool:
    return all(
        sum(1 for b in carrier if pred(a, b, *extra)) == 1 for a in members
    )


def oracle_sub(carrier, pred, extras: int = 0) -> bool:
    cset = _cset(carrier)
    for extra in product(carrier, repeat=extras):
        for x_set in carrier:
            if not _functional_on(x_set.elements, carrier, pred, extra):
                continue
            req = {
                u
                for u in carrier
                if any(pred(v, u, *extra) for v in x_set.elements)
            }
            if canonical(req) not in cset:
                return False
    return True


def oracle_main(carrier, pred, extras: int = 0) -> bool:
    cset = _cset(carrier)
    for extra in product(carrier, repeat=extras):
        for x_set in carrier:
            if not _functional_on(x_set.elements, carrier, pred, extra):
                continue
            witnessed = any(
                all(
                    sum(
                        1
                        for b in carrier
                        if pair_in(f, a, b, cset) == bool(pred(a, b, *extra))
                    )
                    == 1
                    for a in x_set.elements
                )
                for f in carrier
            )
            if not witnessed:
                return False
    return True
