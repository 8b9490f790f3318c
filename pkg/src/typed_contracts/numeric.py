"""Exact number parsing and rendering shared by the instance, menu and report code."""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Rational

DEFAULT_TOLERANCE = 1e-9
DECIMAL_DIGITS = 12


def to_fraction(value) -> Fraction:
    """Convert a JSON-ish literal into an exact ``Fraction``.

    Accepts ints, Fractions, ``"p/q"`` strings, decimal strings and floats.
    Floats are read through their shortest decimal repr, so ``0.1`` becomes
    ``1/10`` rather than the binary expansion.
    """
    if isinstance(value, bool):
        raise TypeError(f"booleans are not numbers: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite number: {value!r}")
        return Fraction(Decimal(repr(value)))
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty numeric literal")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def fraction_str(value) -> str:
    if isinstance(value, float):
        return repr(value)
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def decimal_str(value, digits: int = DECIMAL_DIGITS) -> str:
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    value = Fraction(value)
    if value == 0:
        return "0"
    # format through Decimal to keep huge numerators exact before rounding
    with localcontext() as ctx:
        ctx.prec = digits + 5
        dec = Decimal(value.numerator) / Decimal(value.denominator)
    return f"{dec:.{digits}g}"


def exact(value) -> Fraction:
    """Exact value of an instance entry; floats convert bit-for-bit."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)
