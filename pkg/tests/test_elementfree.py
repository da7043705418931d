from fractions import Fraction as F

import pytest
from hypothesis import given

from conftest import elementfree, findist
from efprob.dist import FinDist, SubDist, pushforward
from efprob.elementfree import (
    FRESH, ElementFree, FreshLabel, MixtureMeasure, base_id_of, continuous_weight, flatten,
    mc_dist, ord_, relabel_fresh,
)
from efprob.multiset import Multiset


def test_validation():
    with pytest.raises(ValueError):
        ElementFree(["2/3", "2/3"])
    with pytest.raises(ValueError):
        ElementFree([0])
    with pytest.raises(ValueError):
        ElementFree(["3/2"])
    phi = ElementFree(["1/5", "1/5"])
    assert phi.tt == F(2, 5) and continuous_weight(phi) == F(3, 5)
    assert not phi.is_discrete() and ElementFree([1]).is_discrete()


def test_render():
    assert str(ElementFree(["1/5", "1/5", "3/5"])) == "[1/5:2, 3/5:1 | w=0]"
    assert str(ElementFree([])) == "[| w=1]"
    assert ElementFree(["1/2"]).to_json() == {"weights": [{"weight": "1/2", "mult": 1}], "w": "1/2"}


def test_ord_example():
    o = ord_(ElementFree(["1/5", "1/5", "3/5"]))
    assert isinstance(o, FinDist)
    assert [o[i] for i in range(5)] == [F(3, 5), F(1, 5), F(1, 5), 0, 0]


def test_ord_subdist_when_continuous():
    o = ord_(ElementFree(["1/4"]))
    assert type(o) is SubDist and o.total() == F(1, 4)


@given(elementfree())
def test_mc_after_ord_is_identity(phi):
    assert mc_dist(ord_(phi)) == phi


@given(findist(max_size=4))
def test_ord_after_mc_sorts_masses(mu):
    o = ord_(mc_dist(mu))
    assert [o[i] for i in range(len(mu))] == sorted(mu.values(), reverse=True)


def test_mc_dist():
    mu = FinDist({"a": "1/4", "b": "1/4", "c": "1/2"})
    assert mc_dist(mu) == ElementFree(["1/4", "1/4", "1/2"])


def test_mixture_measure():
    m = MixtureMeasure({0: "1/5"}, "4/5", "mu")
    assert str(m) == "{0:1/5 | rem=4/5@mu}"
    assert mc_dist(m) == ElementFree(["1/5"])
    with pytest.raises(ValueError):
        MixtureMeasure({0: "1/5"}, "1/5", "mu")
    with pytest.raises(ValueError):
        MixtureMeasure({0: "1/5"}, "4/5")
    assert MixtureMeasure({0: 1}, 0, "mu").base_id is None


def test_flatten():
    mu = FinDist({0: "1/4", 1: "3/4"})
    m = MixtureMeasure({1: "3/5"}, "2/5", base_id_of(mu))
    assert flatten(m, mu) == FinDist({0: "1/10", 1: "9/10"})
    with pytest.raises(ValueError):
        flatten(m, FRESH)
    with pytest.raises(ValueError):
        flatten(m, FinDist({0: 1}))


def test_relabel_fresh():
    a = Multiset({FreshLabel(3): 1, FreshLabel(1): 2, "x": 1})
    assert relabel_fresh(a) == Multiset({FreshLabel(0): 2, FreshLabel(1): 1, "x": 1})
    m = MixtureMeasure({FreshLabel(5): "1/3", FreshLabel(2): "2/3"})
    assert relabel_fresh(m) == MixtureMeasure({FreshLabel(0): "2/3", FreshLabel(1): "1/3"})
    assert str(FreshLabel(0)) == "L0" and base_id_of(FRESH) == "fresh"


@given(findist(max_size=4))
def test_mc_invariant_under_relabel(mu):
    assert mc_dist(pushforward(mu, lambda x: ("t", x))) == mc_dist(mu)
