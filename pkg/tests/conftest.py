from fractions import Fraction

from hypothesis import settings, strategies as st

from efprob import ElementFree, FinDist, IntPartition, Multiset

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def elementfree(draw, max_den=6, max_atoms=4, discrete=None):
    """Random ElementFree with weights k/d, d <= max_den."""
    d = draw(st.integers(1, max_den))
    n = draw(st.integers(0 if discrete is not True else 1, max_atoms))
    parts = draw(st.lists(st.integers(1, d), min_size=n, max_size=n))
    while sum(parts) > d:
        parts.pop()
    if discrete is True:
        if not parts:
            parts = [d]
        else:
            parts[-1] += d - sum(parts)
    elif discrete is False and sum(parts) == d:
        parts.pop()
    return ElementFree([Fraction(p, d) for p in parts])


@st.composite
def findist(draw, min_size=1, max_size=3, max_den=6):
    n = draw(st.integers(min_size, max_size))
    raw = draw(st.lists(st.integers(1, max_den), min_size=n, max_size=n))
    total = sum(raw)
    return FinDist({i: Fraction(r, total) for i, r in enumerate(raw)})


multisets = st.lists(st.sampled_from("abcd"), max_size=7).map(Multiset)
partitions = st.lists(st.integers(1, 4), max_size=5).map(IntPartition)


def key_of(m):
    """Oracle key for a Multiset / IntPartition."""
    if isinstance(m, IntPartition):
        return tuple(m.blocks())
    return frozenset(m.items())


def as_oracle(law):
    return {key_of(x): q for x, q in law.items()}


def mutant_pmn(target=None):
    """pmn with <<sigma>> replaced by <<sigma>> - 1 for one partition."""
    from efprob.dist import SubDist
    from efprob.partition import part_coeff
    from efprob.sampling import _pmn_masses

    target = target or IntPartition.of(2, 1)

    def coeff(s):
        return part_coeff(s) - (1 if s == target else 0)

    return lambda phi, K: SubDist._trusted(_pmn_masses(dict(phi.items()), phi.w, K, coeff))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
