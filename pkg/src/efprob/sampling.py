"""Sampling kernels with and without elements.

``mn`` draws a multiset of K iid elements; ``pmn`` is its element-free
counterpart, a law on integer partitions of K.  ``base_dist`` and
``base_partition`` reattach elements by iid draws from a base measure, and
``dd`` / ``pdd`` delete one uniformly chosen point.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from ._rational import as_fraction, fmt_fraction, sort_key
from .dist import FinDist, SubDist, dirac, iid, pushforward
from .elementfree import (
    ElementFree,
    FreshBase,
    FreshLabel,
    MixtureMeasure,
    base_id_of,
)
from .multiset import Multiset, binom_multi, enumerate_multisets, factorial, multicoeff
from .partition import (
    IntPartition,
    delete_from_block,
    enumerate_partitions,
    part_coeff,
    sub_partition_families,
)


class CertificationError(RuntimeError):
    """The weight stream could not certify the requested error within budget."""


# ---------------------------------------------------------------- multinomial

def _as_flat(mu):
    if isinstance(mu, MixtureMeasure):
        if mu.remainder:
            return None
        return FinDist._trusted(dict(mu.atoms))
    return mu


def mn(mu: SubDist | MixtureMeasure, K: int) -> SubDist:
    """Law of the multiset of K iid draws, built by forgetting the order of
    ``iid(mu, K)``.

    A MixtureMeasure whose remainder sits on the fresh base is accepted:
    each continuous draw yields a new FreshLabel, numbered after the labels
    already present among the atoms.
    """
    flat = _as_flat(mu)
    if flat is not None:
        return pushforward(iid(flat, K), Multiset)
    if mu.base_id != FreshBase.base_id:
        raise ValueError("flatten the mixture against its base before sampling")
    return _mn_fresh(mu, K)


def _mn_fresh(m: MixtureMeasure, K: int) -> FinDist:
    offset = 1 + max((x.index for x in m.atoms if isinstance(x, FreshLabel)), default=-1)
    star = object()
    choices = list(m.atoms.items()) + [(star, m.remainder)]
    out: dict = {}
    for seq in itertools.product(choices, repeat=K):
        p = Fraction(1)
        elems = []
        fresh = 0
        for x, q in seq:
            p *= q
            if x is star:
                elems.append(FreshLabel(offset + fresh))
                fresh += 1
            else:
                elems.append(x)
        key = Multiset(elems)
        out[key] = out.get(key, Fraction(0)) + p
    return FinDist._trusted(out)


def mn_mass(mu: Mapping, phi: Multiset) -> Fraction:
    """Closed form (phi) * prod_x mu(x)^phi(x)."""
    p = Fraction(multicoeff(phi))
    for x, m in phi.items():
        p *= mu[x] ** m
    return p


def mn_formula(mu: FinDist, K: int) -> FinDist:
    """mn via the closed form over all multisets of size K on supp(mu)."""
    return FinDist._trusted({phi: mn_mass(mu, phi) for phi in enumerate_multisets(K, mu.keys())})


def _check_disjoint(sets: Sequence[Iterable]) -> list[frozenset]:
    out = [frozenset(U) for U in sets]
    seen: set = set()
    for U in out:
        if seen & U:
            raise ValueError("the sets U_j must be pairwise disjoint")
        seen |= U
    return out


def _rows(counts) -> list[tuple[int, ...]]:
    counts = list(counts)
    if counts and not isinstance(counts[0], (int,)):
        rows = [tuple(r) for r in counts]
    else:
        rows = [tuple(counts)]
    if len(set(rows)) != len(rows):
        raise ValueError("count rows must be distinct")
    return rows


def mn_ring_value(mu: FinDist, K: int, sets: Sequence[Iterable], counts) -> Fraction:
    """mn(mu, K) of the event "exactly k_j draws land in U_j for every j".

    ``counts`` is one row ``(k_j)_j`` or a list of distinct rows, in which
    case the (disjoint) union of the events is measured.
    """
    Us = _check_disjoint(sets)
    mass_U = [sum((mu[x] for x in U), Fraction(0)) for U in Us]
    mass_V = 1 - sum(mass_U, Fraction(0))
    total = Fraction(0)
    for row in _rows(counts):
        if len(row) != len(Us):
            raise ValueError("one count per set is required")
        s = sum(row)
        if s > K:
            raise ValueError(f"sum of counts {s} exceeds K={K}")
        coeff = factorial(K) // factorial(K - s)
        for k in row:
            coeff //= factorial(k)
        term = Fraction(coeff) * mass_V ** (K - s)
        for mU, k in zip(mass_U, row):
            term *= mU ** k
        total += term
    return total


# ------------------------------------------------------ partition multinomial

def _pmn_masses(counts: Mapping[Fraction, int], w: Fraction, K: int,
                coeff: Callable[[IntPartition], int] = part_coeff) -> dict:
    masses = {}
    for sigma in enumerate_partitions(K):
        acc = Fraction(0)
        for family, k in sub_partition_families(sigma, counts):
            if k and not w:
                continue
            term = w ** k / factorial(k)
            for r, sub in family.items():
                if sub:
                    term *= binom_multi(counts[r], sub) * r ** sub.total
            acc += term
        masses[sigma] = coeff(sigma) * acc
    return masses


def pmn(phi: ElementFree, K: int) -> FinDist:
    """Partition multinomial: law of the partition induced by K iid draws
    from ``phi``, where the continuous part (weight w) only ever makes
    singleton blocks.

    mass(sigma) = <<sigma>> sum_k w^k/k! sum_{families} prod_r (phi(r) choose sigma_r) r^tt(sigma_r)
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    return FinDist(_pmn_masses(dict(phi.items()), phi.w, K))


def pmn_discrete(phi: ElementFree, K: int) -> FinDist:
    """The purely discrete formula (no continuous term); needs w = 0."""
    if not phi.is_discrete():
        raise ValueError("pmn_discrete needs atom weights summing to 1")
    counts = dict(phi.items())
    masses = {}
    for sigma in enumerate_partitions(K):
        acc = Fraction(0)
        for family, k in sub_partition_families(sigma, counts):
            if k:
                continue
            term = Fraction(1)
            for r, sub in family.items():
                term *= binom_multi(counts[r], sub) * r ** sub.total
            acc += term
        masses[sigma] = part_coeff(sigma) * acc
    return FinDist(masses)


def _sub_multisets(sigma: Multiset, max_size: int) -> Iterator[tuple[Multiset, Multiset]]:
    # every (tau, sigma - tau) with tau <= sigma pointwise and |tau| <= max_size
    keys = list(sigma)
    for picks in itertools.product(*(range(sigma[n] + 1) for n in keys)):
        if sum(picks) > max_size:
            continue
        tau = {n: c for n, c in zip(keys, picks) if c}
        rest = {n: sigma[n] - c for n, c in zip(keys, picks) if sigma[n] - c}
        yield IntPartition(tau), IntPartition(rest)


def pmn_submultiset(phi: ElementFree, K: int) -> FinDist:
    """Finite-support discrete formula indexed by the distinct weights
    r_1..r_l, splitting sigma by repeated sub-multiset choice."""
    if not phi.is_discrete():
        raise ValueError("pmn_submultiset needs atom weights summing to 1")
    atoms = list(phi.items())

    def splits(sigma: IntPartition, i: int) -> Fraction:
        if i == len(atoms):
            return Fraction(1) if not sigma else Fraction(0)
        r, n_i = atoms[i]
        acc = Fraction(0)
        for tau, rest in _sub_multisets(sigma, n_i):
            acc += binom_multi(n_i, tau) * r ** tau.total * splits(rest, i + 1)
        return acc

    return FinDist({s: part_coeff(s) * splits(s, 0) for s in enumerate_partitions(K)})


# ----------------------------------------------------- certified truncation

class WeightStream:
    """Atom weights listed as ``(weight, multiplicity)`` in strictly decreasing
    weight order, plus the exact continuous weight of the full distribution.

    The default tail bound after a prefix is ``1 - continuous - partial``,
    exact whenever ``continuous`` is.  ``tail_bound(n, partial)`` may be
    supplied for streams whose continuous weight is only bounded.
    """

    def __init__(self, entries: Callable[[], Iterable[tuple[Any, int]]], continuous: Any = 0,
                 tail_bound: Callable[[int, Fraction], Fraction] | None = None, name: str = "stream"):
        self._entries = entries
        self.continuous = as_fraction(continuous)
        self._tail_bound = tail_bound
        self.name = name

    @classmethod
    def geometric(cls, q: Any) -> WeightStream:
        """Weights (1-q) q^(i-1), i >= 1, each once; they sum to 1."""
        q = as_fraction(q)
        if not 0 < q < 1:
            raise ValueError("geometric ratio must lie in (0, 1)")

        def gen():
            r = 1 - q
            while True:
                yield r, 1
                r *= q

        return cls(gen, 0, name=f"geometric:{fmt_fraction(q)}")

    @classmethod
    def from_elementfree(cls, phi: ElementFree) -> WeightStream:
        items = sorted(phi.items(), reverse=True)
        return cls(lambda: iter(items), phi.w, name=str(phi))

    def __iter__(self) -> Iterator[tuple[Fraction, int]]:
        prev = None
        partial = Fraction(0)
        for r, m in self._entries():
            r = as_fraction(r)
            if not 0 < r <= 1 or m < 1:
                raise ValueError(f"bad stream entry ({r}, {m})")
            if prev is not None and r >= prev:
                raise ValueError("stream weights must be strictly decreasing")
            partial += r * m
            if partial + self.continuous > 1:
                raise ValueError("stream mass exceeds 1")
            prev = r
            yield r, m

    def tail_bound(self, n: int, partial: Fraction) -> Fraction:
        if self._tail_bound is not None:
            return as_fraction(self._tail_bound(n, partial))
        return 1 - self.continuous - partial


@dataclass(frozen=True)
class CertifiedDist:
    """Lower bounds per outcome; each true mass lies in [lower, lower + tail]."""

    lower: SubDist
    tail: Fraction
    prefix_len: int
    w_lo: Fraction
    w_hi: Fraction

    def interval(self, x) -> tuple[Fraction, Fraction]:
        lo = self.lower[x]
        return lo, lo + self.tail

    def to_json(self) -> dict:
        return {"lower": self.lower.to_json(), "tail": fmt_fraction(self.tail),
                "prefix_len": self.prefix_len,
                "w_interval": [fmt_fraction(self.w_lo), fmt_fraction(self.w_hi)]}


def pmn_truncated(ws: WeightStream, K: int, n: int) -> CertifiedDist:
    """Certified bracket from the first ``n`` stream entries.

    Every term of the pmn sum is nonnegative and only grows when atoms are
    added or w increases, so evaluating it on the prefix with continuous
    weight ``w_lo`` bounds each mass from below; the missing total is
    ``1 - (1 - t)^K`` for tail mass t.
    """
    prefix: dict[Fraction, int] = {}
    partial = Fraction(0)
    used = 0
    for r, m in itertools.islice(ws, n):
        prefix[r] = m
        partial += r * m
        used += 1
    t = ws.tail_bound(used, partial)
    return _certify(prefix, ws.continuous, t, K, used)


def _certify(prefix, w_lo, t, K, used) -> CertifiedDist:
    lower = SubDist._trusted(_pmn_masses(prefix, w_lo, K))
    tail = 1 - lower.total()
    return CertifiedDist(lower, tail, used, w_lo, w_lo + t)


def pmn_certified(ws: WeightStream, K: int, eps: Any, max_prefix: int = 10_000) -> CertifiedDist:
    """Truncate ``ws`` at the shortest prefix whose unassigned mass
    ``1 - (1 - t)^K`` is at most ``eps``, and bracket pmn from it."""
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    prefix: dict[Fraction, int] = {}
    partial = Fraction(0)
    used = 0

    def good(t: Fraction) -> bool:
        return 1 - (1 - t) ** K <= eps

    t = ws.tail_bound(0, partial)
    if not good(t):
        for r, m in ws:
            prefix[r] = m
            partial += r * m
            used += 1
            t = ws.tail_bound(used, partial)
            if good(t):
                break
            if used >= max_prefix:
                raise CertificationError(
                    f"{ws.name}: tail {float(t):.3g} still too large after {used} entries")
    if not good(t):
        raise CertificationError(f"{ws.name}: stream ended with uncertified tail {t}")
    return _certify(prefix, ws.continuous, t, K, used)


# ------------------------------------------------------ base-measure draws

def alloc_elementfree(phi: ElementFree, xs: Sequence, base_id: str | None = None) -> MixtureMeasure:
    """Place phi's atom copies, heaviest first, at ``xs``; the continuous
    weight stays on the base named ``base_id``."""
    weights = phi.weights_desc()
    if len(xs) != len(weights):
        raise ValueError(f"need {len(weights)} locations, got {len(xs)}")
    atoms: dict = {}
    for r, x in zip(weights, xs):
        atoms[x] = atoms.get(x, Fraction(0)) + r
    return MixtureMeasure(atoms, phi.w, base_id if phi.w else None)


def base_dist(base: FinDist | FreshBase, phi: ElementFree) -> FinDist:
    """Law of ``(1 - tt(phi)) base + alloc(phi, x)`` with x iid from base."""
    n = phi.size()
    bid = base_id_of(base)
    if isinstance(base, FreshBase):
        return dirac(alloc_elementfree(phi, [FreshLabel(i) for i in range(n)], bid))
    return pushforward(iid(base, n), lambda xs: alloc_elementfree(phi, xs, bid))


def alloc_partition(sigma: IntPartition, xs: Sequence) -> Multiset:
    """``sum_i n_i [x_i]`` with blocks n_1 >= n_2 >= ... taken largest first."""
    blocks = sigma.blocks()
    if len(xs) != len(blocks):
        raise ValueError(f"need {len(blocks)} locations, got {len(xs)}")
    counts: dict = {}
    for n, x in zip(blocks, xs):
        counts[x] = counts.get(x, 0) + n
    return Multiset(counts)


def base_partition(base: FinDist | FreshBase, sigma: IntPartition) -> FinDist:
    """Law on multisets of size tt(sigma): one iid draw per block."""
    n = sigma.size()
    if isinstance(base, FreshBase):
        return dirac(alloc_partition(sigma, [FreshLabel(i) for i in range(n)]))
    return pushforward(iid(base, n), lambda xs: alloc_partition(sigma, xs))


def base_partition_ring_value(mu: FinDist, sigma: IntPartition, sets: Sequence[Iterable],
                              counts) -> Fraction:
    """base_partition(mu, sigma) of "exactly k_j points in U_j for all j",
    by summing over families (tau_j) of sub-partitions with tt(tau_j) = k_j
    and sum_j tau_j <= sigma, each counted by the multinomial
    sigma(n)! / ((sigma(n) - sum_j tau_j(n))! prod_j tau_j(n)!)."""
    Us = _check_disjoint(sets)
    J = len(Us)
    mass_U = [sum((mu[x] for x in U), Fraction(0)) for U in Us]
    mass_V = 1 - sum(mass_U, Fraction(0))
    sizes = sorted(sigma)
    n_blocks = sigma.size()
    total = Fraction(0)
    for row in _rows(counts):
        if len(row) != J:
            raise ValueError("one count per set is required")

        def walk(i: int, totals: tuple, placed: tuple, weight: Fraction) -> Fraction:
            if i == len(sizes):
                if totals != row:
                    return Fraction(0)
                val = weight * mass_V ** (n_blocks - sum(placed))
                for mU, c in zip(mass_U, placed):
                    val *= mU ** c
                return val
            n, avail = sizes[i], sigma[sizes[i]]
            acc = Fraction(0)
            for split in _bounded_tuples(J, avail):
                new_totals = tuple(t + n * c for t, c in zip(totals, split))
                if any(t > k for t, k in zip(new_totals, row)):
                    continue
                coeff = factorial(avail) // factorial(avail - sum(split))
                for c in split:
                    coeff //= factorial(c)
                acc += walk(i + 1, new_totals,
                            tuple(p + c for p, c in zip(placed, split)), weight * coeff)
            return acc

        total += walk(0, (0,) * J, (0,) * J, Fraction(1))
    return total


def _bounded_tuples(J: int, bound: int) -> Iterator[tuple[int, ...]]:
    # all J-tuples of nonnegative ints with sum <= bound
    if J == 0:
        yield ()
        return
    for c in range(bound + 1):
        for rest in _bounded_tuples(J - 1, bound - c):
            yield (c,) + rest


# --------------------------------------------------------------- draw-delete

def dd(phi: Multiset) -> FinDist:
    """Delete one uniformly chosen element: mass phi(x)/|phi| on phi - [x]."""
    K1 = phi.size()
    if K1 == 0:
        raise ValueError("draw-delete needs a nonempty multiset")
    return FinDist._trusted({phi.remove_one(x): Fraction(m, K1) for x, m in phi.items()})


def pdd(sigma: IntPartition) -> FinDist:
    """Delete one uniformly chosen point: mass n sigma(n)/tt on sigma^{n-}."""
    K1 = sigma.total
    if K1 == 0:
        raise ValueError("draw-delete needs a nonempty partition")
    out: dict = {}
    for n, m in sigma.items():
        s = delete_from_block(sigma, n)
        out[s] = out.get(s, Fraction(0)) + Fraction(n * m, K1)
    return FinDist._trusted(out)
