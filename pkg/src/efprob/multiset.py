"""Finite multisets with their multinomial coefficients.

A :class:`Multiset` is an immutable finite map from elements to positive
multiplicities.  Iteration, rendering and enumeration follow ascending
element order so printed tables are reproducible.
"""

from __future__ import annotations

import itertools
import threading
from collections import Counter
from collections.abc import Hashable, Iterable, Iterator, Mapping
from typing import Generic, TypeVar

from ._rational import sort_key

T = TypeVar("T", bound=Hashable)

_fact_table = [1]
_fact_lock = threading.Lock()


def factorial(n: int) -> int:
    """n! from a shared table that grows to the largest n ever requested."""
    if n < 0:
        raise ValueError("factorial of a negative number")
    if n >= len(_fact_table):
        with _fact_lock:
            while len(_fact_table) <= n:
                _fact_table.append(_fact_table[-1] * len(_fact_table))
    return _fact_table[n]


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return factorial(n) // (factorial(k) * factorial(n - k))


class Multiset(Mapping, Generic[T]):
    """Immutable multiset; ``Multiset("aab")`` and ``Multiset({"a": 2, "b": 1})`` agree.

    Mapping lookups return 0 for absent elements rather than raising, to
    match reading a multiset as a function ``X -> N``.
    """

    __slots__ = ("_counts", "_items", "_hash")

    def __init__(self, source: Mapping[T, int] | Iterable[T] = ()):
        if isinstance(source, Mapping):
            counts = {}
            for x, m in source.items():
                if not isinstance(m, int) or isinstance(m, bool) or m < 0:
                    raise ValueError(f"multiplicity of {x!r} must be a nonnegative int, got {m!r}")
                if m:
                    counts[x] = m
        else:
            counts = dict(Counter(source))
        self._counts = counts
        self._items = tuple(sorted(counts.items(), key=lambda kv: sort_key(kv[0])))
        self._hash = None

    @classmethod
    def _from_counts(cls, counts: dict):
        # trusted path: counts already positive
        obj = cls.__new__(cls)
        obj._counts = counts
        obj._items = tuple(sorted(counts.items(), key=lambda kv: sort_key(kv[0])))
        obj._hash = None
        return obj

    def __getitem__(self, x: T) -> int:
        return self._counts.get(x, 0)

    def __contains__(self, x: object) -> bool:
        return x in self._counts

    def __iter__(self) -> Iterator[T]:
        return (x for x, _ in self._items)

    def __len__(self) -> int:
        """Number of distinct elements; see :meth:`size` for the total count."""
        return len(self._items)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Multiset):
            return self._counts == other._counts
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"{type(self).__name__}({dict(self._items)!r})"

    def __str__(self) -> str:
        return "[" + ", ".join(f"{x}:{m}" for x, m in self._items) + "]"

    def sort_key(self) -> tuple:
        return tuple((sort_key(x), m) for x, m in self._items)

    def items(self):
        return self._items

    def support(self) -> tuple[T, ...]:
        return tuple(x for x, _ in self._items)

    def elements(self) -> list[T]:
        """All elements with repetition, ascending."""
        return [x for x, m in self._items for _ in range(m)]

    def size(self) -> int:
        return sum(self._counts.values())

    def __add__(self, other: Multiset[T]) -> Multiset[T]:
        if not isinstance(other, Multiset):
            return NotImplemented
        counts = dict(self._counts)
        for x, m in other._counts.items():
            counts[x] = counts.get(x, 0) + m
        return Multiset._from_counts(counts)

    def remove_one(self, x: T) -> Multiset[T]:
        if x not in self._counts:
            raise KeyError(f"{x!r} is not in the multiset")
        counts = dict(self._counts)
        if counts[x] == 1:
            del counts[x]
        else:
            counts[x] -= 1
        return type(self)._from_counts(counts)

    def map(self, f) -> Multiset:
        """Image multiset under ``f`` (multiplicities of merged elements add)."""
        counts: dict = {}
        for x, m in self._counts.items():
            y = f(x)
            counts[y] = counts.get(y, 0) + m
        return Multiset._from_counts(counts)

    def to_json(self):
        return [{"element": x, "mult": m} for x, m in self._items]


def size(phi: Multiset) -> int:
    return phi.size()


def msum(phi: Multiset[T], psi: Multiset[T]) -> Multiset[T]:
    return phi + psi


def scalar(n: int, x: T) -> Multiset[T]:
    """``n[x]``: the multiset holding ``x`` exactly ``n`` times (``n >= 1``)."""
    if n < 1:
        raise ValueError("scalar multiple needs n >= 1; use Multiset() for the empty multiset")
    return Multiset._from_counts({x: n})


def remove_one(phi: Multiset[T], x: T) -> Multiset[T]:
    return phi.remove_one(x)


def multicoeff(phi: Multiset) -> int:
    """|phi|! / prod_x phi(x)!, the number of distinct orderings of phi."""
    out = factorial(phi.size())
    for m in phi.values():
        out //= factorial(m)
    return out


def binom_multi(n: int, phi: Multiset) -> int:
    """``(n choose phi)`` = n! / ((n - |phi|)! prod_x phi(x)!)."""
    k = phi.size()
    if n < k:
        raise ValueError(f"n={n} is smaller than |phi|={k}")
    out = factorial(n) // factorial(n - k)
    for m in phi.values():
        out //= factorial(m)
    return out


def enumerate_multisets(K: int, domain: Iterable[T]) -> list[Multiset[T]]:
    """All multisets of size K over ``domain``, in lexicographic order of
    their ascending element lists."""
    dom = sorted(domain, key=sort_key)
    if len(set(dom)) != len(dom):
        raise ValueError("domain elements must be pairwise distinct")
    if K < 0:
        raise ValueError("K must be nonnegative")
    return [Multiset(combo) for combo in itertools.combinations_with_replacement(dom, K)]
