"""Integer partitions as multisets of block sizes.

``IntPartition({2: 1, 1: 1})`` is the partition [2,1] of 3.  Rendering is
descending (``[3,1,1]``); storage is the multiset of block sizes.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from functools import lru_cache

from .multiset import Multiset, binom_multi, factorial


class IntPartition(Multiset[int]):
    __slots__ = ()

    def __init__(self, blocks: Mapping[int, int] | Iterable[int] = ()):
        super().__init__(blocks)
        for n in self._counts:
            if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
                raise ValueError(f"block sizes must be positive ints, got {n!r}")

    @classmethod
    def of(cls, *blocks: int) -> IntPartition:
        return cls(blocks)

    @property
    def total(self) -> int:
        return sum(n * m for n, m in self._counts.items())

    def blocks(self) -> list[int]:
        """Block sizes in descending order."""
        return sorted(self.elements(), reverse=True)

    def __add__(self, other):
        out = super().__add__(other)
        if out is NotImplemented or not isinstance(other, IntPartition):
            return out
        return IntPartition._from_counts(out._counts)

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.blocks())) + "]"

    def __repr__(self) -> str:
        return f"IntPartition({self.blocks()!r})"

    def sort_key(self) -> tuple:
        return (self.total, tuple(-b for b in self.blocks()))

    def to_json(self) -> list[int]:
        return self.blocks()


def singletons(k: int) -> IntPartition:
    """``k[1]``, the all-singleton partition of k."""
    return IntPartition._from_counts({1: k} if k else {})


def tt(sigma: Multiset[int]) -> int:
    return sum(n * m for n, m in sigma.items())


@lru_cache(maxsize=None)
def _partitions(K: int, largest: int) -> tuple[tuple[int, ...], ...]:
    # descending block tuples of K with all parts <= largest, reverse-lex order
    if K == 0:
        return ((),)
    out = []
    for first in range(min(K, largest), 0, -1):
        for rest in _partitions(K - first, first):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_partitions(K: int) -> list[IntPartition]:
    """P(K) in reverse-lexicographic order of descending block lists:
    for K=3 that is [3], [2,1], [1,1,1]."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    return [IntPartition(p) for p in _partitions(K, K)]


@lru_cache(maxsize=None)
def partition_count(K: int) -> int:
    """p(K) via Euler's pentagonal-number recurrence."""
    if K < 0:
        return 0
    if K == 0:
        return 1
    total, j = 0, 1
    while True:
        g1 = j * (3 * j - 1) // 2
        if g1 > K:
            break
        sign = 1 if j % 2 else -1
        total += sign * partition_count(K - g1)
        g2 = j * (3 * j + 1) // 2
        if g2 <= K:
            total += sign * partition_count(K - g2)
        j += 1
    return total


def part_coeff(sigma: Multiset[int]) -> int:
    """K! / prod_n (n!)^sigma(n) with K = tt(sigma)."""
    out = factorial(tt(sigma))
    for n, m in sigma.items():
        out //= factorial(n) ** m
    return out


def mc_multiset(phi: Multiset) -> IntPartition:
    """Multiplicity count: the partition whose blocks are phi's multiplicities."""
    counts: dict[int, int] = {}
    for m in phi.values():
        counts[m] = counts.get(m, 0) + 1
    return IntPartition._from_counts(counts)


def delete_from_block(sigma: IntPartition, n: int) -> IntPartition:
    """Remove one point from a block of size n (a 1-block disappears)."""
    if n not in sigma:
        raise KeyError(f"no block of size {n} in {sigma}")
    counts = dict(sigma._counts)
    counts[n] -= 1
    if not counts[n]:
        del counts[n]
    if n > 1:
        counts[n - 1] = counts.get(n - 1, 0) + 1
    return IntPartition._from_counts(counts)


def insert_into_block(sigma: IntPartition, n: int) -> IntPartition:
    """Grow a block of size n by one point; n=0 opens a new singleton."""
    counts = dict(sigma._counts)
    if n:
        if n not in counts:
            raise KeyError(f"no block of size {n} in {sigma}")
        counts[n] -= 1
        if not counts[n]:
            del counts[n]
    counts[n + 1] = counts.get(n + 1, 0) + 1
    return IntPartition._from_counts(counts)


def sub_partition_families(sigma: IntPartition, caps: Mapping):
    """Split ``sigma`` as ``sum_r sigma_r + k[1]`` with ``|sigma_r| <= caps[r]``.

    Returns a list of ``(family, k)`` where ``family`` maps each key of
    ``caps`` to an :class:`IntPartition`.  Each decomposition appears once.
    Blocks are assigned size by size; a branch is cut as soon as the blocks
    still to place exceed the remaining capacity.
    """
    keys = list(caps)
    cap0 = tuple(int(caps[r]) for r in keys)
    sizes = sorted(sigma, reverse=True)
    out = []
    total_blocks = sigma.size()
    for k in range(sigma[1] + 1):
        counts = [sigma[n] - (k if n == 1 else 0) for n in sizes]
        if total_blocks - k > sum(cap0):
            continue
        assign = [dict() for _ in keys]

        def place(i: int, remaining_caps: tuple, left_after: int):
            # i indexes block sizes; left_after = blocks of sizes > i not yet placed
            if i == len(sizes):
                family = {r: IntPartition._from_counts({n: c for n, c in a.items() if c})
                          for r, a in zip(keys, assign)}
                out.append((family, k))
                return
            n, c = sizes[i], counts[i]
            rest = left_after - c
            for split, new_caps in _compositions(c, remaining_caps):
                if rest > sum(new_caps):
                    continue
                for j, s in enumerate(split):
                    assign[j][n] = s
                place(i + 1, new_caps, rest)
            for a in assign:
                a.pop(n, None)

        place(0, cap0, total_blocks - k)
    return out


def _compositions(c: int, caps: tuple):
    """Weak compositions of c into len(caps) parts, part j <= caps[j]."""
    if not caps:
        if c == 0:
            yield (), ()
        return
    if c > sum(caps):
        return
    first, rest = caps[0], caps[1:]
    for s in range(min(c, first), -1, -1):
        for tail_split, tail_caps in _compositions(c - s, rest):
            yield (s,) + tail_split, (first - s,) + tail_caps


def family_weight(family: Mapping, mults: Mapping) -> int:
    """prod_r (mults[r] choose family[r]) -- the allocation count of a family."""
    out = 1
    for r, sub in family.items():
        out *= binom_multi(mults[r], sub)
    return out
