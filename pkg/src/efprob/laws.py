"""Exact checks of the commuting diagrams relating element-based and
element-free sampling, and exhaustive sweeps over small grids.

Each ``check_*`` evaluates both composites of one diagram at one input and
returns a :class:`LawReport`.  :func:`run_sweep` aggregates them per law.
"""

from __future__ import annotations

import itertools
import math
import os
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any

from ._rational import fmt_fraction, sort_key
from .dist import FinDist, SubDist, bind, diff, dirac, dist_equal, mixture, pushforward, to_jsonable
from .elementfree import (
    FRESH,
    ElementFree,
    FreshBase,
    MixtureMeasure,
    flatten,
    mc_dist,
    ord_,
    relabel_fresh,
)
from .multiset import Multiset, enumerate_multisets
from .partition import IntPartition, enumerate_partitions, mc_multiset
from .sampling import base_dist, base_partition, dd, mn, pdd, pmn

HOLDS = "holds"
COUNTEREXAMPLE = "counterexample"
EXPECTED_FAILURE_CONFIRMED = "expected-failure-confirmed"
EXPECTED_FAILURE_MISSING = "expected-failure-missing"

LAW_IDS = ("mc-mn", "base-mn", "retract-dist", "retract-part", "dd-mc", "pdd-base",
           "kingman", "definetti", "naturality", "beta-alpha", "coeq")

PmnFn = Callable[[ElementFree, int], SubDist]


@dataclass
class LawReport:
    law: str
    carrier: str
    params: dict
    verdict: str
    cases: int = 1
    counterexample: dict | None = None
    note: str | None = None

    @property
    def ok(self) -> bool:
        return self.verdict in (HOLDS, EXPECTED_FAILURE_CONFIRMED)

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def _payload(inp: Any, lhs: Mapping, rhs: Mapping) -> dict:
    def side(d):
        return [{"outcome": str(x), "mass": fmt_fraction(q)} for x, q in
                sorted(d.items(), key=lambda kv: sort_key(kv[0]))]
    return {
        "input": inp if isinstance(inp, str) else str(inp),
        "lhs": side(lhs),
        "rhs": side(rhs),
        "diff": [{"outcome": str(x), "lhs": fmt_fraction(a), "rhs": fmt_fraction(b)}
                 for x, (a, b) in diff(lhs, rhs).items()],
    }


def _compare(law, carrier, params, inp, lhs, rhs, *, expect_failure=False, note=None) -> LawReport:
    equal = dist_equal(lhs, rhs)
    if expect_failure:
        verdict = EXPECTED_FAILURE_MISSING if equal else EXPECTED_FAILURE_CONFIRMED
        payload = _payload(inp, lhs, rhs)
    else:
        verdict = HOLDS if equal else COUNTEREXAMPLE
        payload = None if equal else _payload(inp, lhs, rhs)
    return LawReport(law, carrier, params, verdict, 1, payload, note)


def _describe(base) -> str:
    return "fresh-label nonatomic base" if isinstance(base, FreshBase) else f"base {base}"


# Caches keyed on hashable exact values; results are immutable.
_mn = lru_cache(maxsize=None)(mn)
_pmn = lru_cache(maxsize=None)(pmn)
_base_partition = lru_cache(maxsize=None)(base_partition)
_base_dist = lru_cache(maxsize=None)(base_dist)


def _pmn_for(pmn_fn: PmnFn) -> PmnFn:
    return _pmn if pmn_fn is pmn else pmn_fn


# ----------------------------------------------------------------- sampling

def check_mc_mn(mu: FinDist, K: int, pmn_fn: PmnFn = pmn) -> LawReport:
    """mc after mn_K equals pmn_K after mc."""
    lhs = pushforward(_mn(mu, K), mc_multiset)
    rhs = _pmn_for(pmn_fn)(mc_dist(mu), K)
    return _compare("mc-mn", f"X={sorted(mu.keys())}", {"K": K}, f"mu={mu}", lhs, rhs)


def _mn_after_base(base, K):
    if isinstance(base, FreshBase):
        return lambda m: _mn(m, K)
    return lambda m: _mn(flatten(m, base), K)


def check_base_mn(base: FinDist | FreshBase, phi: ElementFree, K: int,
                  pmn_fn: PmnFn = pmn) -> LawReport:
    """mn_K after base equals base after pmn_K, as laws on multisets.

    With the fresh base both sides are compared up to renaming of fresh
    labels, the only structure a nonatomic base leaves observable.
    """
    lhs = bind(_base_dist(base, phi), _mn_after_base(base, K))
    rhs = bind(_pmn_for(pmn_fn)(phi, K), lambda s: _base_partition(base, s))
    note = None
    if isinstance(base, FreshBase):
        lhs, rhs = pushforward(lhs, relabel_fresh), pushforward(rhs, relabel_fresh)
        note = "fresh-label model"
    return _compare("base-mn", _describe(base), {"K": K}, f"phi={phi}", lhs, rhs, note=note)


def check_retract_dist(phi: ElementFree, base: FinDist | FreshBase = FRESH) -> LawReport:
    """mc after base_mu is the identity on element-free distributions.

    Holds for the nonatomic (fresh) base.  For an atomic base ``mu`` the
    law is expected to fail and the report says whether it did.
    """
    if isinstance(base, FreshBase):
        lhs = pushforward(_base_dist(base, phi), mc_dist)
        return _compare("retract-dist", _describe(base), {}, f"phi={phi}", lhs, dirac(phi),
                        note="fresh-label model")
    lhs = pushforward(_base_dist(base, phi), lambda m: mc_dist(flatten(m, base)))
    return _compare("retract-dist-atomic", _describe(base), {}, f"phi={phi}", lhs, dirac(phi),
                    expect_failure=True)


def check_retract_partition(sigma: IntPartition) -> LawReport:
    lhs = pushforward(_base_partition(FRESH, sigma), mc_multiset)
    return _compare("retract-part", _describe(FRESH), {"K": sigma.total}, f"sigma={sigma}",
                    lhs, dirac(sigma), note="fresh-label model")


def check_dd_mc(carrier: Sequence, K: int) -> LawReport:
    """mc after dd equals pdd after mc, for every multiset of size K+1."""
    cases = 0
    for phi in enumerate_multisets(K + 1, carrier):
        cases += 1
        lhs = pushforward(dd(phi), mc_multiset)
        rhs = pdd(mc_multiset(phi))
        if not dist_equal(lhs, rhs):
            rep = _compare("dd-mc", f"X={list(carrier)}", {"K": K}, f"phi={phi}", lhs, rhs)
            rep.cases = cases
            return rep
    return LawReport("dd-mc", f"X={list(carrier)}", {"K": K}, HOLDS, cases)


def check_pdd_base(sigma: IntPartition, base: FinDist | FreshBase) -> LawReport:
    """dd after base equals base after pdd, from a partition of K+1."""
    lhs = bind(_base_partition(base, sigma), dd)
    rhs = bind(pdd(sigma), lambda s: _base_partition(base, s))
    note = None
    if isinstance(base, FreshBase):
        lhs, rhs = pushforward(lhs, relabel_fresh), pushforward(rhs, relabel_fresh)
        note = "fresh-label model"
    return _compare("pdd-base", _describe(base), {"K": sigma.total - 1}, f"sigma={sigma}",
                    lhs, rhs, note=note)


def check_kingman_cone(phi: ElementFree, K: int, pmn_fn: PmnFn = pmn) -> LawReport:
    """pdd after pmn_{K+1} equals pmn_K."""
    f = _pmn_for(pmn_fn)
    lhs = bind(f(phi, K + 1), pdd)
    return _compare("kingman", "partitions", {"K": K}, f"phi={phi}", lhs, f(phi, K))


def check_definetti_cone(mu: FinDist, K: int) -> LawReport:
    """dd after mn_{K+1} equals mn_K."""
    lhs = bind(_mn(mu, K + 1), dd)
    return _compare("definetti", f"X={sorted(mu.keys())}", {"K": K}, f"mu={mu}", lhs, _mn(mu, K))


# ------------------------------------------------------ natural transformations

def random_distribution(omega: FinDist, base: FinDist) -> FinDist:
    """``(omega >>= base)(base)`` with every outcome flattened to a FinDist."""
    return bind(omega, lambda phi: pushforward(_base_dist(base, phi), lambda m: flatten(m, base)))


def check_naturality(omega: FinDist, f: Callable | Mapping, mu: FinDist) -> LawReport:
    """GG(f) after (omega >>= base)_X equals (omega >>= base)_Y after G(f)."""
    fn = f.__getitem__ if isinstance(f, Mapping) else f
    lhs = pushforward(random_distribution(omega, mu), lambda nu: pushforward(nu, fn))
    rhs = random_distribution(omega, pushforward(mu, fn))
    fdesc = {x: fn(x) for x in mu}
    return _compare("naturality", f"X={sorted(mu.keys())}", {},
                    f"omega={omega}, f={fdesc}, mu={mu}", lhs, rhs)


def check_beta_alpha(omega: FinDist) -> LawReport:
    """G(mc) applied to (omega >>= base) at the nonatomic base gives omega back."""
    lhs = pushforward(bind(omega, lambda phi: _base_dist(FRESH, phi)), mc_dist)
    return _compare("beta-alpha", _describe(FRESH), {}, f"omega={omega}", lhs, omega,
                    note="fresh-label model")


# ----------------------------------------------------------- coequalizer

def entropy(mu: Mapping) -> float:
    return -math.fsum(float(q) * math.log(float(q)) for q in mu.values() if q)


INVARIANT_STATS: dict[str, Callable[[Mapping], Any]] = {
    "entropy": entropy,
    "max_weight": lambda mu: max(mu.values(), default=Fraction(0)),
    "weight_multiset": lambda mu: Multiset(mu.values()),
}


def check_coequalizer_invariance(mu: FinDist, pi: Mapping) -> LawReport:
    """mc is unchanged by relabelling along a permutation ``pi``, and each
    permutation-invariant statistic factors through ord after mc."""
    moved = pushforward(mu, pi.__getitem__)
    lhs, rhs = mc_dist(moved), mc_dist(mu)
    inp = f"mu={mu}, pi={dict(pi)}"
    carrier = f"X={sorted(mu.keys())}"
    if lhs != rhs:
        return LawReport("coeq", carrier, {}, COUNTEREXAMPLE, 1,
                         {"input": inp, "lhs": str(lhs), "rhs": str(rhs)})
    canon = ord_(rhs)
    for name, stat in INVARIANT_STATS.items():
        a, b = stat(moved), stat(canon)
        if a != b:
            return LawReport("coeq", carrier, {"statistic": name}, COUNTEREXAMPLE, 1,
                             {"input": inp, "lhs": str(a), "rhs": str(b)})
    return LawReport("coeq", carrier, {}, HOLDS)


# ----------------------------------------------------------------- grids

@dataclass(frozen=True)
class SweepBounds:
    max_k: int = 5
    max_carrier: int = 3
    max_den: int = 4
    max_partition_k: int = 6

    ENV = {"max_k": "EFPROB_MAX_K", "max_carrier": "EFPROB_MAX_CARRIER",
           "max_den": "EFPROB_MAX_DEN", "max_partition_k": "EFPROB_MAX_PARTITION_K"}

    @classmethod
    def from_env(cls, env: Mapping[str, str] | None = None, **overrides) -> SweepBounds:
        env = os.environ if env is None else env
        vals = {}
        for attr, var in cls.ENV.items():
            if overrides.get(attr) is not None:
                vals[attr] = int(overrides[attr])
            elif var in env:
                vals[attr] = int(env[var])
        return cls(**vals)


def weight_grid(max_den: int) -> list[Fraction]:
    return sorted({Fraction(k, d) for d in range(1, max_den + 1) for k in range(1, d + 1)})


def elementfree_grid(max_den: int) -> list[ElementFree]:
    """Every ElementFree whose weights are k/d with d <= max_den."""
    weights = weight_grid(max_den)
    out = []

    def grow(i: int, counts: dict, mass: Fraction):
        if i == len(weights):
            out.append(ElementFree(counts))
            return
        r = weights[i]
        m = 0
        while mass + m * r <= 1:
            grow(i + 1, {**counts, r: m} if m else counts, mass + m * r)
            m += 1

    grow(0, {}, Fraction(0))
    return sorted(out, key=sort_key)


def dist_grid(max_carrier: int, max_den: int) -> list[FinDist]:
    """Distributions on {0..n-1}, n <= max_carrier, with full support and
    masses sharing a denominator d <= max_den."""
    seen = {}
    for n in range(1, max_carrier + 1):
        for d in range(n, max_den + 1):
            for cuts in itertools.combinations(range(1, d), n - 1):
                parts = [b - a for a, b in zip((0,) + cuts, cuts + (d,))]
                mu = FinDist({i: Fraction(p, d) for i, p in enumerate(parts)})
                seen[mu] = None
    return sorted(seen, key=sort_key)


def omega_grid(max_den: int) -> list[FinDist]:
    """Diracs on the element-free grid plus a few two-point mixtures."""
    phis = elementfree_grid(max_den)
    out = [dirac(p) for p in phis]
    picks = [ElementFree([1]), ElementFree([]), ElementFree(["1/2", "1/2"]),
             ElementFree(["1/3", "2/3"]), ElementFree(["3/5"])]
    for a, b in itertools.combinations(picks, 2):
        out.append(FinDist({a: Fraction(1, 3), b: Fraction(2, 3)}))
    return out


def _maps(n: int):
    # every map {0..n-1} -> {0,1} and every permutation of {0..n-1}
    for img in itertools.product((0, 1), repeat=n):
        yield dict(enumerate(img))
    for perm in itertools.permutations(range(n)):
        yield dict(enumerate(perm))


# ----------------------------------------------------------------- sweeps

def _aggregate(law: str, reports: Iterable[LawReport], carrier: str, ranges: dict,
               note: str | None = None) -> LawReport:
    cases = 0
    bad = None
    verdict = HOLDS
    for r in reports:
        cases += r.cases
        if not r.ok and bad is None:
            bad = r
            verdict = r.verdict
        elif r.verdict == EXPECTED_FAILURE_CONFIRMED and verdict == HOLDS:
            verdict = EXPECTED_FAILURE_CONFIRMED
            bad = bad or r
    return LawReport(law, carrier, ranges, verdict, cases,
                     bad.counterexample if bad else None, note)


def _sweep_law(law: str, b: SweepBounds, pmn_fn: PmnFn) -> list[LawReport]:
    Ks = range(b.max_k + 1)
    mus = dist_grid(b.max_carrier, b.max_den)
    phis = elementfree_grid(b.max_den)
    ranges = {"K": [0, b.max_k], "|X|": [1, b.max_carrier], "max_den": b.max_den}
    carrier = f"finite carriers up to size {b.max_carrier}"
    if law == "mc-mn":
        reps = (check_mc_mn(mu, K, pmn_fn) for mu in mus for K in Ks)
        return [_aggregate(law, reps, carrier, ranges)]
    if law == "base-mn":
        reps = (check_base_mn(base, phi, K, pmn_fn)
                for base in [*mus, FRESH] for phi in phis for K in Ks)
        return [_aggregate(law, reps, carrier + " and fresh-label base", ranges)]
    if law == "retract-dist":
        fresh = _aggregate(law, (check_retract_dist(phi) for phi in phis),
                           "fresh-label nonatomic base", {"max_den": b.max_den},
                           note="fresh-label model")
        atomic = check_retract_dist(ElementFree(["1/3", "2/3"]), dirac("a"))
        return [fresh, atomic]
    if law == "retract-part":
        reps = (check_retract_partition(s) for K in range(b.max_partition_k + 1)
                for s in enumerate_partitions(K))
        return [_aggregate(law, reps, "fresh-label nonatomic base",
                           {"K": [0, b.max_partition_k]}, note="fresh-label model")]
    if law == "dd-mc":
        reps = (check_dd_mc(list(range(n)), K) for n in range(1, b.max_carrier + 1) for K in Ks)
        return [_aggregate(law, reps, carrier, ranges)]
    if law == "pdd-base":
        reps = (check_pdd_base(s, base) for base in [*mus, FRESH]
                for K in range(1, b.max_partition_k + 1) for s in enumerate_partitions(K))
        return [_aggregate(law, reps, carrier + " and fresh-label base",
                           {"K": [0, b.max_partition_k - 1], "|X|": [1, b.max_carrier]})]
    if law == "kingman":
        reps = (check_kingman_cone(phi, K, pmn_fn) for phi in phis for K in Ks)
        return [_aggregate(law, reps, "partitions", {"K": [0, b.max_k], "max_den": b.max_den})]
    if law == "definetti":
        reps = (check_definetti_cone(mu, K) for mu in mus for K in Ks)
        return [_aggregate(law, reps, carrier, ranges)]
    if law == "naturality":
        reps = (check_naturality(omega, f, mu) for mu in mus for f in _maps(len(mu))
                for omega in omega_grid(b.max_den))
        return [_aggregate(law, reps, carrier, {"|X|": [1, b.max_carrier], "max_den": b.max_den})]
    if law == "beta-alpha":
        omegas = omega_grid(b.max_den) + [FinDist({ElementFree([1]): Fraction(1, 3),
                                                   ElementFree([]): Fraction(2, 3)})]
        return [_aggregate(law, (check_beta_alpha(o) for o in omegas),
                           "fresh-label nonatomic base", {"max_den": b.max_den},
                           note="fresh-label model")]
    if law == "coeq":
        reps = (check_coequalizer_invariance(mu, dict(enumerate(perm)))
                for mu in mus for perm in itertools.permutations(range(len(mu))))
        return [_aggregate(law, reps, "prefixes of N", {"|X|": [1, b.max_carrier],
                                                        "max_den": b.max_den})]
    raise ValueError(f"unknown law id {law!r}")


def run_sweep(laws: Iterable[str] = ("all",), bounds: SweepBounds | None = None,
              pmn_fn: PmnFn = pmn) -> list[LawReport]:
    """Run the selected sweeps; reports come back sorted by law id."""
    bounds = bounds or SweepBounds()
    selected = []
    for law in laws:
        if law == "all":
            selected.extend(LAW_IDS)
        elif law in LAW_IDS:
            selected.append(law)
        else:
            raise ValueError(f"unknown law id {law!r}")
    reports = [r for law in dict.fromkeys(selected) for r in _sweep_law(law, bounds, pmn_fn)]
    return sorted(reports, key=lambda r: (r.law, r.carrier))


def all_ok(reports: Iterable[LawReport]) -> bool:
    return all(r.ok for r in reports)
