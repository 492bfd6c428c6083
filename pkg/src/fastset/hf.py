"""Canonical hereditarily finite sets.

HFSet values are interned: structurally equal sets are the same Python
object, so equality is identity and hashing is cheap.  The element tuple
is kept in a fixed total order (rank first, then lexicographically by
element list), which makes printed literals and generated universes
byte-stable across runs.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Optional

__all__ = [
    "HFSet",
    "canonical",
    "empty_set",
    "rank",
    "zermelo_numeral",
    "as_numeral",
    "v_universe",
    "hf_text",
    "V_UNIVERSE_MAX_RANK",
]

# |V_5| = 65536; V_6 would have 2**65536 elements.
V_UNIVERSE_MAX_RANK = 5


class HFSet:
    """A hereditarily finite set.  Construct via canonical()."""

    __slots__ = ("elements", "rank", "element_set", "_key")

    elements: tuple["HFSet", ...]
    rank: int
    element_set: frozenset
    _key: tuple

    def __new__(cls, *_args, **_kwargs):
        raise TypeError("HFSet cannot be instantiated directly; use canonical()")

    # Default object identity semantics: interning makes identity coincide
    # with extensional equality.

    def __lt__(self, other: "HFSet") -> bool:
        return self._key < other._key

    def __le__(self, other: "HFSet") -> bool:
        return self is other or self._key < other._key

    def __gt__(self, other: "HFSet") -> bool:
        return other._key < self._key

    def __ge__(self, other: "HFSet") -> bool:
        return self is other or other._key < self._key

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, item) -> bool:
        return item in self.element_set

    def __repr__(self) -> str:
        return f"HFSet({hf_text(self)})"


_intern: dict[tuple, HFSet] = {}


def canonical(elems: Iterable[HFSet]) -> HFSet:
    """Build the canonical HFSet with the given elements (deduplicated,
    sorted in the fixed total order)."""
    uniq: list[HFSet] = []
    seen: set[int] = set()
    for e in elems:
        if not isinstance(e, HFSet):
            raise TypeError(f"HFSet elements must be HFSet, got {type(e).__name__}")
        if id(e) not in seen:
            seen.add(id(e))
            uniq.append(e)
    uniq.sort(key=lambda h: h._key)
    key = tuple(uniq)
    cached = _intern.get(key)
    if cached is not None:
        return cached
    obj = object.__new__(HFSet)
    obj.elements = key
    obj.rank = 0 if not key else 1 + max(e.rank for e in key)
    obj.element_set = frozenset(key)
    obj._key = (obj.rank, tuple(e._key for e in key))
    return _intern.setdefault(key, obj)


empty_set: HFSet = canonical([])


def rank(x: HFSet) -> int:
    """0 for the empty set, else 1 + max rank of the elements."""
    return x.rank


def zermelo_numeral(n: int) -> HFSet:
    """0 maps to the empty set, n+1 to the singleton of numeral n."""
    if n < 0:
        raise ValueError("numerals are defined for naturals only")
    acc = empty_set
    for _ in range(n):
        acc = canonical([acc])
    return acc


def as_numeral(x: HFSet) -> Optional[int]:
    """Inverse of zermelo_numeral, or None if x is not a numeral."""
    n = 0
    while True:
        if not x.elements:
            return n
        if len(x.elements) != 1:
            return None
        x = x.elements[0]
        n += 1


@lru_cache(maxsize=None)
def v_universe(k: int) -> tuple[HFSet, ...]:
    """All hereditarily finite sets of rank < k, in canonical order.

    Guarded at k <= 5: the universes grow double-exponentially.
    """
    if k < 0:
        raise ValueError("universe height must be a natural number")
    if k > V_UNIVERSE_MAX_RANK:
        raise ValueError(
            f"universe height {k} exceeds the guard {V_UNIVERSE_MAX_RANK} "
            f"(|V_{V_UNIVERSE_MAX_RANK}| = 65536)"
        )
    level: list[HFSet] = []
    for _ in range(k):
        n = len(level)
        level = [
            canonical([level[i] for i in range(n) if mask >> i & 1])
            for mask in range(1 << n)
        ]
    return tuple(sorted(level, key=lambda h: h._key))


def hf_text(x: HFSet) -> str:
    """Concrete syntax for a set value: decimal numeral when the value is
    a Zermelo numeral, braces otherwise."""
    n = as_numeral(x)
    if n is not None:
        return str(n)
    return "{" + ", ".join(hf_text(e) for e in x.elements) + "}"
