from collections import Counter
from fractions import Fraction as F

import numpy as np
import pytest

from efprob.dist import FinDist, dirac
from efprob.elementfree import ElementFree
from efprob.montecarlo import (
    DegenerateGofError, RngConfig, UrnSampler, chi_square, gof_partition, gof_prefix,
    mutant_sampler, sample_multiset, sample_partition_seq, sample_partitions,
)
from efprob.partition import IntPartition
from efprob.sampling import pmn

PHI = ElementFree(["1/2", "1/2"])


def test_determinism_and_streams():
    a = sample_partitions(PHI, 4, 200, RngConfig(7))
    b = sample_partitions(PHI, 4, 200, RngConfig(7))
    c = sample_partitions(PHI, 4, 200, RngConfig(7).spawn(1))
    assert a == b and a != c
    with pytest.raises(ValueError):
        RngConfig(0, algorithm="mt").generator()


def test_samples_are_partitions_of_K():
    phi = ElementFree(["1/3", "1/4"])
    for s in sample_partitions(phi, 5, 300, RngConfig(1)):
        assert s.total == 5
    assert sample_partition_seq(ElementFree([]), 3, RngConfig(0)) == IntPartition.of(1, 1, 1)
    assert sample_partitions(PHI, 0, 3, RngConfig(0)) == [IntPartition()] * 3


def test_path_grows_one_point_at_a_time():
    u = UrnSampler(ElementFree(["1/2"]))
    row = u.draw_indices(RngConfig(3).generator(), 1, 6)[0]
    path = u.path_of(row)
    assert [s.total for s in path] == list(range(7))


def test_sample_multiset():
    m = sample_multiset("uniform", 4, RngConfig(0))
    assert m.size() == 4 and len(m) == 4
    mu = FinDist({"a": "1/2", "b": "1/2"})
    assert sample_multiset(mu, 5, RngConfig(0)).size() == 5
    with pytest.raises(ValueError):
        sample_multiset("normal", 2, RngConfig(0))


def test_chi_square_pooling():
    law = FinDist({"a": "98/100", "b": "1/100", "c": "1/100"})
    res = chi_square(Counter({"a": 980, "b": 10, "c": 10}), law, 1000)
    assert res.categories == 3 and res.verdict
    # b and c pool to 2 < 5 expected and fold into a: nothing left to test
    with pytest.raises(DegenerateGofError):
        chi_square(Counter({"a": 98, "b": 1, "c": 1}), law, 100)
    with pytest.raises(DegenerateGofError):
        chi_square(Counter({"a": 10}), dirac("a"), 10)


def test_chi_square_unexpected_outcome_fails():
    res = chi_square(Counter({"a": 900, "z": 100}), FinDist({"a": "1/2", "b": "1/2"}), 1000)
    assert not res.verdict


def test_gof_pass_and_mutant_fail():
    phi = ElementFree(["1/2", "1/4"])
    good = gof_partition(phi, 3, 20000, RngConfig(5))
    bad = gof_partition(phi, 3, 20000, RngConfig(5), sampler=mutant_sampler(phi))
    assert good.verdict and not bad.verdict
    assert good.to_json()["verdict"] == "pass"
    assert gof_prefix(phi, 3, 20000, RngConfig(6)).verdict


def test_gof_needs_samples():
    with pytest.raises(ValueError):
        gof_partition(PHI, 2, 10, RngConfig(0))


def test_empirical_frequencies_close():
    samples = Counter(sample_partitions(PHI, 2, 40000, RngConfig(11)))
    law = pmn(PHI, 2)
    for s, q in law.items():
        assert abs(samples[s] / 40000 - float(q)) < 0.01


def test_sampler_validation():
    with pytest.raises(ValueError):
        UrnSampler(PHI, [0.5, 0.5])
    u = UrnSampler(ElementFree(["1/4"]))
    assert np.allclose(u.probs, [0.25, 0.75]) and u.fresh == 1
    assert F(1, 4) == ElementFree(["1/4"]).tt
