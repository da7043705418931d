"""Exact finite (sub)probability distributions and Kleisli composition.

Masses are :class:`~fractions.Fraction`; equality is exact.  A kernel is any
callable ``x -> SubDist``; :class:`TableKernel` is the tabulated form used
on small carriers.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Hashable, Iterable, Mapping
from fractions import Fraction
from typing import Any

from ._rational import as_fraction, fmt_fraction, sort_key


class SubDist(Mapping):
    """Finite-support measure with positive rational masses summing to <= 1.

    Lookup of an outcome outside the support returns ``Fraction(0)``.
    """

    __slots__ = ("_masses", "_items", "_hash")
    _exact_total = False

    def __init__(self, masses: Mapping[Any, Any] | Iterable[tuple[Any, Any]] = ()):
        pairs = masses.items() if isinstance(masses, Mapping) else masses
        acc: dict = {}
        for x, p in pairs:
            q = as_fraction(p)
            if q < 0:
                raise ValueError(f"negative mass {q} at {x!r}")
            acc[x] = acc.get(x, Fraction(0)) + q
        self._set({x: q for x, q in acc.items() if q})
        self._check()

    @classmethod
    def _trusted(cls, masses: dict):
        obj = cls.__new__(cls)
        obj._set({x: q for x, q in masses.items() if q})
        return obj

    def _set(self, masses: dict) -> None:
        self._masses = masses
        self._items = None
        self._hash = None

    def _check(self) -> None:
        t = self.total()
        if t > 1:
            raise ValueError(f"total mass {t} exceeds 1")

    def __getitem__(self, x) -> Fraction:
        return self._masses.get(x, Fraction(0))

    def __contains__(self, x: object) -> bool:
        return x in self._masses

    def __iter__(self):
        return (x for x, _ in self.items())

    def __len__(self) -> int:
        return len(self._masses)

    def items(self):
        if self._items is None:
            self._items = tuple(sorted(self._masses.items(), key=lambda kv: sort_key(kv[0])))
        return self._items

    def total(self) -> Fraction:
        return sum(self._masses.values(), Fraction(0))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SubDist):
            return self._masses == other._masses
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._masses.items()))
        return self._hash

    def sort_key(self) -> tuple:
        return tuple((sort_key(x), q) for x, q in self.items())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({{{', '.join(f'{x!r}: {fmt_fraction(q)}' for x, q in self.items())}}})"

    def __str__(self) -> str:
        return "{" + ", ".join(f"{x}:{fmt_fraction(q)}" for x, q in self.items()) + "}"

    def to_json(self) -> list[dict]:
        return [{"outcome": to_jsonable(x), "mass": fmt_fraction(q)} for x, q in self.items()]


class FinDist(SubDist):
    """Finite-support probability distribution (masses sum to exactly 1)."""

    __slots__ = ()
    _exact_total = True

    def _check(self) -> None:
        t = self.total()
        if t != 1:
            raise ValueError(f"masses sum to {t}, not 1")


def to_jsonable(x: Any):
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, Fraction):
        return fmt_fraction(x)
    if isinstance(x, tuple):
        return [to_jsonable(e) for e in x]
    if isinstance(x, (int, str, float)) or x is None:
        return x
    return str(x)


def _result_cls(*dists) -> type:
    return FinDist if all(isinstance(d, FinDist) for d in dists) else SubDist


def dirac(x: Hashable) -> FinDist:
    return FinDist._trusted({x: Fraction(1)})


def uniform(xs: Iterable[Hashable]) -> FinDist:
    xs = list(xs)
    if not xs:
        raise ValueError("uniform distribution on an empty carrier")
    return FinDist([(x, Fraction(1, len(xs))) for x in xs])


def pushforward(mu: SubDist, f: Callable) -> SubDist:
    """Image measure; masses of outcomes with equal images are added."""
    out: dict = {}
    for x, p in mu._masses.items():
        y = f(x)
        out[y] = out.get(y, Fraction(0)) + p
    return _result_cls(mu)._trusted(out)


def bind(mu: SubDist, k: Callable[[Any], SubDist]) -> SubDist:
    """``k`` applied to ``mu``: y -> sum_x mu(x) k(x)(y)."""
    out: dict = {}
    cls = _result_cls(mu)
    for x, p in mu._masses.items():
        kx = k(x)
        if not isinstance(kx, FinDist):
            cls = SubDist
        for y, q in kx._masses.items():
            out[y] = out.get(y, Fraction(0)) + p * q
    return cls._trusted(out)


def mixture(components: Iterable[tuple[Any, SubDist]]) -> SubDist:
    """sum_i w_i * nu_i for rational weights w_i."""
    out: dict = {}
    weight_total = Fraction(0)
    exact = True
    for w, nu in components:
        w = as_fraction(w)
        weight_total += w
        exact = exact and isinstance(nu, FinDist)
        for y, q in nu._masses.items():
            out[y] = out.get(y, Fraction(0)) + w * q
    cls = FinDist if exact and weight_total == 1 else SubDist
    return cls._trusted(out)


def product(mu: SubDist, nu: SubDist) -> SubDist:
    out = {(x, y): p * q for x, p in mu._masses.items() for y, q in nu._masses.items()}
    return _result_cls(mu, nu)._trusted(out)


def iid(mu: SubDist, K: int) -> SubDist:
    """Law of K independent draws as a distribution over length-K tuples."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    support = list(mu.items())
    out: dict = {}
    for combo in itertools.product(support, repeat=K):
        p = Fraction(1)
        for _, q in combo:
            p *= q
        out[tuple(x for x, _ in combo)] = p
    return _result_cls(mu)._trusted(out)


iid_K = iid


def dist_equal(mu: Mapping, nu: Mapping) -> bool:
    """Exact equality of mass maps, ignoring zero entries and ordering."""
    a = {x: as_fraction(p) for x, p in mu.items() if p}
    b = {x: as_fraction(p) for x, p in nu.items() if p}
    return a == b


def diff(mu: Mapping, nu: Mapping) -> dict:
    """Outcomes where the two mass maps disagree, with (mu, nu) masses."""
    keys = set(mu) | set(nu)
    out = {}
    for x in sorted(keys, key=sort_key):
        a = mu.get(x, Fraction(0)) or Fraction(0)
        b = nu.get(x, Fraction(0)) or Fraction(0)
        if a != b:
            out[x] = (a, b)
    return out


class TableKernel:
    """Kernel tabulated on a finite carrier: ``table[x]`` is a SubDist."""

    __slots__ = ("table",)

    def __init__(self, table: Mapping[Any, SubDist]):
        self.table = dict(table)

    @classmethod
    def tabulate(cls, k: Callable[[Any], SubDist], carrier: Iterable) -> TableKernel:
        return cls({x: k(x) for x in carrier})

    def __call__(self, x) -> SubDist:
        return self.table[x]

    @property
    def carrier(self) -> list:
        return sorted(self.table, key=sort_key)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TableKernel):
            return NotImplemented
        return self.table.keys() == other.table.keys() and all(
            dist_equal(self.table[x], other.table[x]) for x in self.table)


def kleisli_compose(k: Callable, h: Callable) -> Callable:
    """The kernel ``x -> bind(k(x), h)`` (first k, then h).

    Two tabulated kernels compose to a tabulated kernel on k's carrier.
    """
    if isinstance(k, TableKernel):
        return TableKernel({x: bind(kx, h) for x, kx in k.table.items()})
    return lambda x: bind(k(x), h)
