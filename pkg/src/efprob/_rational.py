"""Exact-rational coercion, rendering and a total sort key for mixed outcomes."""

from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Rational
from typing import Any


def as_fraction(x: Any) -> Fraction:
    """Convert ``x`` to a Fraction without silent rounding.

    ints, Fractions and strings (``"3/5"``, ``"0.25"``) are accepted as-is.
    A float is accepted only when its shortest decimal repr denotes the
    same rational as its binary value (``0.25`` passes, ``0.1`` does not).
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not weights")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, float):
        exact = Fraction(x)
        if exact != Fraction(repr(x)):
            raise ValueError(f"float {x!r} is not exactly representable; pass 'p/q' instead")
        return exact
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            raise ValueError(f"not a rational: {x!r}") from None
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


def fmt_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def fmt_decimal(q: Fraction, digits: int = 12) -> str:
    with localcontext() as ctx:
        ctx.prec = digits + 40
        return f"{Decimal(q.numerator) / Decimal(q.denominator):.{digits}f}"


def sort_key(x: Any) -> tuple:
    # Total order across the outcome types that appear in this package.
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, (int, Fraction)):
        return (0, x)
    if isinstance(x, float):
        return (0, Fraction(x))
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, len(x), tuple(sort_key(e) for e in x))
    key = getattr(x, "sort_key", None)
    if callable(key):
        return (3, type(x).__name__, key())
    return (9, type(x).__name__, repr(x))
