"""Floating-point samplers and chi-square validation against exact laws.

Samplers draw through numpy's counter-based Philox generator; a seed and a
stream index fix the output bit for bit.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Hashable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import stats

from .dist import FinDist
from .elementfree import ElementFree
from .multiset import Multiset
from .partition import IntPartition
from .sampling import pmn

UNIFORM = "uniform"


@dataclass(frozen=True)
class RngConfig:
    seed: int = 0
    algorithm: str = "philox"
    stream: int = 0

    def generator(self) -> np.random.Generator:
        if self.algorithm != "philox":
            raise ValueError(f"unsupported algorithm {self.algorithm!r}")
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.Philox(ss))

    def spawn(self, i: int) -> RngConfig:
        """Independent stream ``i`` derived from this seed."""
        return RngConfig(self.seed, self.algorithm, i)


class UrnSampler:
    """Sequential urn over the atom copies of ``phi`` plus a fresh-colour slot.

    Each draw picks atom copy j with probability r_j (copies of equal weight
    are distinct colours) or, with probability w, a colour never seen before.
    Weights are rounded to float once, here.
    """

    def __init__(self, phi: ElementFree, probs: Sequence[float] | None = None):
        self.phi = phi
        weights = phi.weights_desc()
        if probs is None:
            probs = [float(r) for r in weights] + [float(phi.w)]
        p = np.asarray(probs, dtype=float)
        if len(p) != len(weights) + 1 or (p < 0).any():
            raise ValueError("need one nonnegative probability per atom copy plus the fresh slot")
        self.probs = p / p.sum()
        self.fresh = len(weights)

    def draw_indices(self, gen: np.random.Generator, n: int, K: int) -> np.ndarray:
        return gen.choice(len(self.probs), size=(n, K), p=self.probs)

    def partition_of(self, row) -> IntPartition:
        counts = Counter(int(c) for c in row if c != self.fresh)
        blocks = list(counts.values()) + [1] * int(np.count_nonzero(row == self.fresh))
        return IntPartition(blocks)

    def path_of(self, row) -> list[IntPartition]:
        """Partitions after 0, 1, ..., K draws."""
        return [self.partition_of(row[:k]) for k in range(len(row) + 1)]

    def sample(self, K: int, n: int, rng: RngConfig) -> list[IntPartition]:
        if K == 0:
            return [IntPartition()] * n
        rows = self.draw_indices(rng.generator(), n, K)
        return [self.partition_of(row) for row in rows]


def sample_partition_seq(phi: ElementFree, K: int, rng: RngConfig) -> IntPartition:
    if K < 0:
        raise ValueError("K must be nonnegative")
    return UrnSampler(phi).sample(K, 1, rng)[0]


def sample_partitions(phi: ElementFree, K: int, n: int, rng: RngConfig,
                      sampler: UrnSampler | None = None) -> list[IntPartition]:
    return (sampler or UrnSampler(phi)).sample(K, n, rng)


def sample_multiset(mu: FinDist | str, K: int, rng: RngConfig) -> Multiset:
    """K iid draws as a multiset; ``mu="uniform"`` draws floats in [0, 1).

    Repeated floats from the uniform base raise instead of merging.
    """
    gen = rng.generator()
    if isinstance(mu, str):
        if mu != UNIFORM:
            raise ValueError(f"unknown base {mu!r}")
        xs = gen.random(K).tolist()
        if len(set(xs)) != len(xs):
            raise RuntimeError("collision among continuous uniform draws")
        return Multiset(xs)
    support = list(mu.keys())
    p = np.array([float(mu[x]) for x in support])
    idx = gen.choice(len(support), size=K, p=p / p.sum())
    return Multiset(support[i] for i in idx)


@dataclass(frozen=True)
class GofResult:
    statistic: float
    dof: int
    p_value: float
    n_samples: int
    threshold: float
    categories: int

    @property
    def verdict(self) -> bool:
        return self.p_value > self.threshold

    def to_json(self) -> dict:
        return {"statistic": self.statistic, "dof": self.dof, "p_value": self.p_value,
                "n_samples": self.n_samples, "threshold": self.threshold,
                "categories": self.categories, "verdict": "pass" if self.verdict else "fail"}


class DegenerateGofError(ValueError):
    """Fewer than two categories remain after pooling."""


def chi_square(observed: Counter, expected_law: FinDist, n: int, threshold: float = 0.01,
               min_expected: float = 5.0) -> GofResult:
    """Pearson chi-square of counts against an exact law.

    Outcomes with expected count below ``min_expected`` are pooled, together
    with any observed outcome the law gives zero mass; a pool that is still
    too small is merged into the smallest regular category.
    """
    expected = {x: float(q) * n for x, q in expected_law.items()}
    big = sorted((x for x, e in expected.items() if e >= min_expected),
                 key=lambda x: expected[x])
    big_set = set(big)
    cats_obs = [observed.get(x, 0) for x in big]
    cats_exp = [expected[x] for x in big]
    pool_obs = sum(c for x, c in observed.items() if x not in big_set)
    pool_exp = sum(e for x, e in expected.items() if x not in big_set)
    if pool_exp > 0 or pool_obs > 0:
        if pool_exp >= min_expected or not cats_exp:
            cats_obs.append(pool_obs)
            cats_exp.append(pool_exp)
        else:
            cats_obs[0] += pool_obs
            cats_exp[0] += pool_exp
    if len(cats_exp) < 2:
        raise DegenerateGofError("fewer than 2 categories after pooling")
    if min(cats_exp) == 0:
        stat, p = float("inf"), 0.0
    else:
        obs = np.array(cats_obs, dtype=float)
        exp = np.array(cats_exp, dtype=float)
        stat = float(((obs - exp) ** 2 / exp).sum())
        p = float(stats.chi2.sf(stat, len(cats_exp) - 1))
    return GofResult(stat, len(cats_exp) - 1, p, n, threshold, len(cats_exp))


def gof_partition(phi: ElementFree, K: int, n: int, rng: RngConfig, threshold: float = 0.01,
                  sampler: UrnSampler | None = None) -> GofResult:
    """Chi-square of ``n`` urn samples of P(K) against the exact pmn law."""
    if n < 1000:
        raise ValueError("goodness of fit needs n >= 1000")
    samples = sample_partitions(phi, K, n, rng, sampler)
    return chi_square(Counter(samples), pmn(phi, K), n, threshold)


def gof_prefix(phi: ElementFree, K: int, n: int, rng: RngConfig,
               threshold: float = 0.01) -> GofResult:
    """Chi-square of the K-draw prefix of (K+1)-draw urn paths against pmn_K."""
    if n < 1000:
        raise ValueError("goodness of fit needs n >= 1000")
    sampler = UrnSampler(phi)
    rows = sampler.draw_indices(rng.generator(), n, K + 1)
    prefixes = Counter(sampler.partition_of(row[:K]) for row in rows)
    return chi_square(prefixes, pmn(phi, K), n, threshold)


def mutant_sampler(phi: ElementFree) -> UrnSampler:
    """Urn with the fresh-slot probability swapped with the heaviest atom copy."""
    p = [float(r) for r in phi.weights_desc()] + [float(phi.w)]
    p[0], p[-1] = p[-1], p[0]
    return UrnSampler(phi, p)
