"""Element-free distributions (finite support), mixture measures, fresh labels.

An :class:`ElementFree` value is a multiset of atom weights in (0, 1] whose
weighted total ``tt`` is at most 1; the missing mass ``1 - tt`` is the
weight of the continuous (nonatomic) part.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from ._rational import as_fraction, fmt_fraction, sort_key
from .dist import FinDist, SubDist
from .multiset import Multiset


class ElementFree(Multiset[Fraction]):
    """``ElementFree({Fraction(1, 5): 2, Fraction(3, 5): 1})`` is [1/5, 1/5, 3/5]."""

    __slots__ = ()

    def __init__(self, weights: Mapping[Any, int] | Iterable[Any] = ()):
        if isinstance(weights, Mapping):
            counts: dict[Fraction, int] = {}
            for r, m in weights.items():
                q = as_fraction(r)
                counts[q] = counts.get(q, 0) + m
            super().__init__(counts)
        else:
            super().__init__([as_fraction(r) for r in weights])
        for r in self._counts:
            if not 0 < r <= 1:
                raise ValueError(f"atom weight {r} is outside (0, 1]")
        if self.tt > 1:
            raise ValueError(f"atom weights total {self.tt} > 1")

    @property
    def tt(self) -> Fraction:
        return sum((r * m for r, m in self._counts.items()), Fraction(0))

    @property
    def w(self) -> Fraction:
        return 1 - self.tt

    def is_discrete(self) -> bool:
        return self.tt == 1

    def weights_desc(self) -> list[Fraction]:
        """Every atom copy's weight, largest first."""
        return sorted(self.elements(), reverse=True)

    def __str__(self) -> str:
        body = ", ".join(f"{fmt_fraction(r)}:{m}" for r, m in self._items)
        return f"[{body} | w={fmt_fraction(self.w)}]" if body else f"[| w={fmt_fraction(self.w)}]"

    def __repr__(self) -> str:
        return f"ElementFree({{{', '.join(f'{fmt_fraction(r)!r}: {m}' for r, m in self._items)}}})"

    def sort_key(self) -> tuple:
        return (len(self.elements()), tuple((-r, m) for r, m in reversed(self._items)))

    def to_json(self) -> dict:
        return {"weights": [{"weight": fmt_fraction(r), "mult": m} for r, m in self._items],
                "w": fmt_fraction(self.w)}


@dataclass(frozen=True, order=True)
class FreshLabel:
    """A symbolic point of a nonatomic space; distinct indices are distinct points."""

    index: int

    def __str__(self) -> str:
        return f"L{self.index}"

    def sort_key(self) -> tuple:
        return (self.index,)

    def to_json(self) -> str:
        return str(self)


class FreshBase:
    """Stand-in for a nonatomic base measure: every draw is a new FreshLabel."""

    base_id = "fresh"

    def __repr__(self) -> str:
        return "FRESH"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FreshBase)

    def __hash__(self) -> int:
        return hash(FreshBase)


FRESH = FreshBase()


def base_id_of(base: FinDist | FreshBase) -> str:
    if isinstance(base, FreshBase):
        return base.base_id
    return "mu" + str(base)


class MixtureMeasure:
    """``remainder * base + sum_x atoms[x] * delta_x`` with base named by ``base_id``."""

    __slots__ = ("atoms", "remainder", "base_id", "_hash")

    def __init__(self, atoms: Mapping[Hashable, Any], remainder: Any = 0, base_id: str | None = None):
        acc: dict = {}
        for x, p in atoms.items():
            q = as_fraction(p)
            if q <= 0:
                raise ValueError(f"atom weight at {x!r} must be positive")
            acc[x] = q
        rem = as_fraction(remainder)
        if rem < 0:
            raise ValueError("negative remainder")
        if sum(acc.values(), Fraction(0)) + rem != 1:
            raise ValueError("atom weights plus remainder must equal 1")
        if rem and base_id is None:
            raise ValueError("a nonzero remainder needs a base_id")
        self.atoms = dict(sorted(acc.items(), key=lambda kv: sort_key(kv[0])))
        self.remainder = rem
        self.base_id = base_id if rem else None
        self._hash = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MixtureMeasure):
            return NotImplemented
        return (self.atoms == other.atoms and self.remainder == other.remainder
                and self.base_id == other.base_id)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self.atoms.items()), self.remainder, self.base_id))
        return self._hash

    def sort_key(self) -> tuple:
        return (self.remainder, tuple((sort_key(x), q) for x, q in self.atoms.items()),
                self.base_id or "")

    def __str__(self) -> str:
        body = ", ".join(f"{x}:{fmt_fraction(q)}" for x, q in self.atoms.items())
        if self.remainder:
            body += f" | rem={fmt_fraction(self.remainder)}@{self.base_id}"
        return "{" + body + "}"

    __repr__ = __str__

    def to_json(self) -> dict:
        from .dist import to_jsonable
        return {"atoms": [{"element": to_jsonable(x), "weight": fmt_fraction(q)}
                          for x, q in self.atoms.items()],
                "remainder": fmt_fraction(self.remainder), "base": self.base_id}


def continuous_weight(phi: ElementFree) -> Fraction:
    return phi.w


def mc_dist(mu: SubDist | MixtureMeasure) -> ElementFree:
    """Multiplicity count of atom weights.

    The remainder of a MixtureMeasure is read as nonatomic and contributes
    nothing; flatten first when the base is atomic.
    """
    masses = mu.atoms.values() if isinstance(mu, MixtureMeasure) else mu.values()
    counts: dict[Fraction, int] = {}
    for q in masses:
        counts[q] = counts.get(q, 0) + 1
    return ElementFree(counts)


def ord_(phi: ElementFree) -> SubDist:
    """Weights of phi on 0, 1, 2, ... in decreasing order (FinDist when discrete)."""
    masses = {i: r for i, r in enumerate(phi.weights_desc())}
    return (FinDist if phi.is_discrete() else SubDist)._trusted(masses)


def flatten(m: MixtureMeasure, base: FinDist | FreshBase) -> FinDist:
    """Replace the remainder by ``remainder * base`` and merge with the atoms."""
    out = dict(m.atoms)
    if m.remainder:
        if isinstance(base, FreshBase):
            raise ValueError("a nonatomic remainder has no finite flat form")
        if m.base_id != base_id_of(base):
            raise ValueError(f"mixture is over base {m.base_id!r}, got {base_id_of(base)!r}")
        for x, p in base.items():
            out[x] = out.get(x, Fraction(0)) + m.remainder * p
    return FinDist._trusted(out)


def relabel_fresh(obj):
    """Canonical representative up to renaming of fresh labels.

    Fresh labels are renumbered 0, 1, ... by decreasing multiplicity (or atom
    weight), ties kept in index order.  Other elements are untouched.
    """
    if isinstance(obj, MixtureMeasure):
        fresh = sorted((x for x in obj.atoms if isinstance(x, FreshLabel)),
                       key=lambda x: (-obj.atoms[x], x.index))
        ren = {x: FreshLabel(i) for i, x in enumerate(fresh)}
        return MixtureMeasure({ren.get(x, x): q for x, q in obj.atoms.items()},
                              obj.remainder, obj.base_id)
    if isinstance(obj, Multiset):
        fresh = sorted((x for x in obj if isinstance(x, FreshLabel)),
                       key=lambda x: (-obj[x], x.index))
        ren = {x: FreshLabel(i) for i, x in enumerate(fresh)}
        return Multiset({ren.get(x, x): m for x, m in obj.items()})
    raise TypeError(f"cannot relabel {type(obj).__name__}")
