"""Worked examples for each operation, checked by value."""

from collections import Counter
from fractions import Fraction as F

import pytest

import oracles
from efprob.dist import FinDist, TableKernel, dirac, dist_equal, iid, kleisli_compose, pushforward, uniform
from efprob.elementfree import (
    FRESH, ElementFree, FreshLabel, MixtureMeasure, continuous_weight, flatten, mc_dist, ord_,
)
from efprob.laws import (
    HOLDS, check_base_mn, check_beta_alpha, check_coequalizer_invariance, check_dd_mc,
    check_definetti_cone, check_kingman_cone, check_mc_mn, check_naturality, check_pdd_base,
    check_retract_dist, check_retract_partition,
)
from efprob.montecarlo import (
    DegenerateGofError, RngConfig, gof_partition, sample_multiset, sample_partition_seq,
    sample_partitions,
)
from efprob.multiset import Multiset, binom_multi, enumerate_multisets, multicoeff, scalar
from efprob.partition import IntPartition, mc_multiset, sub_partition_families, tt
from efprob.sampling import (
    WeightStream, alloc_elementfree, base_dist, base_partition, base_partition_ring_value, dd,
    mn, mn_ring_value, pdd, pmn, pmn_certified,
)

P = IntPartition.of
M = Multiset
HALF = FinDist({0: "1/2", 1: "1/2"})
MU = FinDist({0: "1/4", 1: "3/4"})
AB = uniform("ab")


def test_multiset_examples():
    assert [M(s).size() for s in ("", "aab", "aaabc")] == [0, 3, 5]
    assert M("") + M("a") == M("a") and M("ab") + M("a") == M("aab")
    assert M("aa") + M("bb") == M("aabb")
    assert scalar(3, "a") == M("aaa") and scalar(1, "b") == M("b") and scalar(2, 1) == M([1, 1])
    assert M("aab").remove_one("a") == M("ab") and M("a").remove_one("a") == M()
    assert [multicoeff(M(s)) for s in ("", "aab", "abc")] == [1, 3, 6]
    assert binom_multi(0, M()) == 1 and binom_multi(3, M("aa")) == 3
    assert enumerate_multisets(0, "ab") == [M()]
    assert enumerate_multisets(2, "ab") == [M("aa"), M("ab"), M("bb")]
    assert enumerate_multisets(3, "a") == [M("aaa")]


def test_partition_examples():
    assert [tt(P(*b)) for b in [(), (1, 2), (3, 1, 1)]] == [0, 3, 5]
    assert mc_multiset(M("aab")) == P(2, 1) and mc_multiset(M()) == P()
    assert mc_multiset(M("aaabc")) == P(3, 1, 1)
    fams = sub_partition_families(P(1), {"r": 1})
    assert sorted((f["r"].blocks(), k) for f, k in fams) == [([], 1), ([1], 0)]
    assert sub_partition_families(P(), {"r": 2, "s": 1}) == [({"r": P(), "s": P()}, 0)]


def test_elementfree_examples():
    assert mc_dist(dirac("x")) == ElementFree([1])
    assert mc_dist(MixtureMeasure({"x": "1/3"}, "2/3", "u")) == ElementFree(["1/3"])
    assert mc_dist(MixtureMeasure({}, 1, "u")) == ElementFree([])
    assert dict(ord_(ElementFree([]))) == {}
    o = ord_(ElementFree(["3/5"]))
    assert dict(o) == {0: F(3, 5)} and o.total() == F(3, 5)
    assert [continuous_weight(ElementFree(w)) for w in (["1/3", "2/3"], ["3/5"], [])] == [0, F(2, 5), 1]
    assert flatten(MixtureMeasure({0: "3/5"}, "2/5", "mu" + str(MU)), MU) == FinDist({0: "7/10", 1: "3/10"})
    assert flatten(MixtureMeasure({"x": 1}), MU) == dirac("x")


def test_dist_examples():
    assert dirac("a")["a"] == 1 and dirac(P(2, 1)) == FinDist({P(2, 1): 1}) and dirac(0)[0] == 1
    assert pushforward(AB, lambda _: "c") == dirac("c")
    assert pushforward(MU, lambda x: x) == MU
    nu = FinDist({0: "1/4", 1: "1/4", 2: "1/2"})
    assert pushforward(nu, lambda x: "even" if x % 2 == 0 else "odd") == FinDist({"even": "3/4", "odd": "1/4"})
    assert iid(MU, 0) == dirac(())
    assert iid(HALF, 2) == uniform([(0, 0), (0, 1), (1, 0), (1, 1)])
    assert iid(MU, 2) == FinDist({(0, 0): "1/16", (0, 1): "3/16", (1, 0): "3/16", (1, 1): "9/16"})
    assert dist_equal(dirac("a"), dirac("a")) and not dist_equal(dirac("a"), dirac("b"))


def test_kleisli_examples():
    unit = TableKernel({x: dirac(x) for x in (0, 1)})
    k = TableKernel({0: FinDist({0: "1/3", 1: "2/3"}), 1: dirac(1)})
    assert kleisli_compose(k, unit) == k and kleisli_compose(unit, k) == k
    coin = TableKernel({0: HALF, 1: HALF})
    xor = TableKernel({0: FinDist({0: "3/4", 1: "1/4"}), 1: FinDist({0: "1/4", 1: "3/4"})})
    comp = kleisli_compose(coin, xor)
    mat = oracles.matmul([[coin(x)[y] for y in (0, 1)] for x in (0, 1)],
                         [[xor(x)[y] for y in (0, 1)] for x in (0, 1)])
    assert [[comp(x)[y] for y in (0, 1)] for x in (0, 1)] == mat
    d = kleisli_compose(TableKernel({0: dirac(1)}), TableKernel({1: dirac(2)}))
    assert d(0) == dirac(2)


def test_mn_examples():
    assert mn(dirac("a"), 3) == dirac(M("aaa"))
    assert dict(mn(MU, 2)) == {M([0, 0]): F(1, 16), M([0, 1]): F(6, 16), M([1, 1]): F(9, 16)}
    assert mn(MU, 0) == dirac(M())
    assert mn_ring_value(HALF, 2, [{0}], (2,)) == F(1, 4)
    assert mn_ring_value(HALF, 2, [{0}, {1}], (1, 1)) == F(1, 2)
    assert mn_ring_value(MU, 3, [{0}], (0,)) == F(3, 4) ** 3


def test_certified_examples():
    single = pmn_certified(WeightStream(lambda: iter([(1, 1)])), 3, "1/2")
    assert single.tail == 0 and dict(single.lower) == dict(pmn(ElementFree([1]), 3))
    cert = pmn_certified(WeightStream.geometric("1/2"), 1, F(1, 2 ** 20))
    assert cert.lower[P(1)] >= 1 - F(1, 2 ** 20)


def test_allocation_examples():
    assert alloc_elementfree(ElementFree([1]), ["x"]) == MixtureMeasure({"x": 1})
    assert alloc_elementfree(ElementFree(["1/3", "2/3"]), ["x", "x"]) == MixtureMeasure({"x": 1})
    assert alloc_elementfree(ElementFree(["3/5"]), ["x"], "mu") == MixtureMeasure({"x": "3/5"}, "2/5", "mu")
    assert base_dist(FRESH, ElementFree(["1/2", "1/2"])) == dirac(
        MixtureMeasure({FreshLabel(0): "1/2", FreshLabel(1): "1/2"}))
    assert dict(base_partition(AB, P(1, 1))) == {M("aa"): F(1, 4), M("ab"): F(1, 2), M("bb"): F(1, 4)}
    assert dict(base_partition(AB, P(2))) == {M("aa"): F(1, 2), M("bb"): F(1, 2)}
    assert base_partition(FRESH, P(2, 1)) == dirac(M([FreshLabel(0), FreshLabel(0), FreshLabel(1)]))


def test_base_ring_examples():
    assert base_partition_ring_value(AB, P(1), [{"a", "b"}], (1,)) == 1
    assert base_partition_ring_value(AB, P(1, 1), [{"a"}], (1,)) == F(1, 2)
    assert base_partition_ring_value(AB, P(2), [{"a"}], (2,)) == F(1, 2)


def test_draw_delete_examples():
    assert dict(dd(M("aab"))) == {M("ab"): F(2, 3), M("aa"): F(1, 3)}
    assert dd(M("a")) == dirac(M()) and dd(M("aa")) == dirac(M("a"))
    assert dict(pdd(P(2, 1))) == {P(1, 1): F(2, 3), P(2): F(1, 3)}
    assert pdd(P(4)) == dirac(P(3)) and pdd(P(1)) == dirac(P())


OMEGA = FinDist({ElementFree([1]): "1/2", ElementFree(["1/2", "1/2"]): "1/2"})


@pytest.mark.parametrize("make", [
    lambda: check_mc_mn(dirac("a"), 3),
    lambda: check_mc_mn(HALF, 2),
    lambda: check_mc_mn(MU, 3),
    lambda: check_base_mn(MU, ElementFree([1]), 2),
    lambda: check_base_mn(FRESH, ElementFree(["1/2", "1/2"]), 2),
    lambda: check_base_mn(HALF, ElementFree(["3/5"]), 2),
    lambda: check_retract_dist(ElementFree([1])),
    lambda: check_retract_dist(ElementFree(["1/3", "2/3"])),
    lambda: check_retract_dist(ElementFree(["3/5"])),
    lambda: check_retract_partition(P(4)),
    lambda: check_retract_partition(P(2, 1)),
    lambda: check_retract_partition(P(1, 1, 1)),
    lambda: check_dd_mc(["a", "b"], 2),
    lambda: check_dd_mc(["a"], 0),
    lambda: check_dd_mc(["a", "b"], 1),
    lambda: check_pdd_base(P(1), MU),
    lambda: check_pdd_base(P(2, 1), AB),
    lambda: check_pdd_base(P(2), FRESH),
    lambda: check_kingman_cone(ElementFree([1]), 4),
    lambda: check_kingman_cone(ElementFree(["1/2", "1/2"]), 2),
    lambda: check_kingman_cone(ElementFree(["3/5"]), 3),
    lambda: check_definetti_cone(dirac("a"), 2),
    lambda: check_definetti_cone(MU, 2),
    lambda: check_definetti_cone(uniform(range(3)), 3),
    lambda: check_naturality(dirac(ElementFree([1])), {0: "x", 1: "y"}, MU),
    lambda: check_naturality(dirac(ElementFree(["1/2", "1/2"])), {0: "c", 1: "c"}, HALF),
    lambda: check_naturality(OMEGA, {0: 1, 1: 0}, MU),
    lambda: check_beta_alpha(dirac(ElementFree([1]))),
    lambda: check_beta_alpha(dirac(ElementFree(["1/3", "2/3"]))),
    lambda: check_beta_alpha(FinDist({ElementFree([1]): "1/3", ElementFree([]): "2/3"})),
    lambda: check_coequalizer_invariance(FinDist({0: 1}), {0: 1, 1: 0}),
    lambda: check_coequalizer_invariance(FinDist({0: "1/5", 1: "1/5", 2: "3/5"}), {0: 1, 1: 2, 2: 0}),
    lambda: check_coequalizer_invariance(MU, {0: 0, 1: 1}),
])
def test_law_examples(make):
    assert make().verdict == HOLDS


def test_dd_mc_sides_for_aab():
    lhs = pushforward(dd(M("aab")), mc_multiset)
    assert dict(lhs) == dict(pdd(P(2, 1))) == {P(1, 1): F(2, 3), P(2): F(1, 3)}


def test_sampler_examples():
    assert sample_partition_seq(ElementFree([1]), 5, RngConfig(9)) == P(5)
    assert sample_partition_seq(ElementFree([]), 5, RngConfig(9)) == P(1, 1, 1, 1, 1)
    n = 100_000
    hits = Counter(sample_partitions(ElementFree(["1/2", "1/2"]), 2, n, RngConfig(3)))[P(2)]
    assert abs(hits - n / 2) <= 3 * (n * 0.25) ** 0.5
    assert sample_multiset(dirac("a"), 3, RngConfig(0)) == M("aaa")
    assert sample_multiset(HALF, 2, RngConfig(4)) == sample_multiset(HALF, 2, RngConfig(4))
    assert mc_multiset(sample_multiset("uniform", 4, RngConfig(1))) == P(1, 1, 1, 1)
    with pytest.raises(DegenerateGofError):
        gof_partition(ElementFree([1]), 3, 1000, RngConfig(0))
