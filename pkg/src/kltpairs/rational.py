"""Exact rational text I/O: ``"p/q"`` or integers, never floats."""
from __future__ import annotations

import re
from fractions import Fraction

_Q = re.compile(r"\s*(-?\d+)(?:\s*/\s*(\d+))?\s*")


def parse_q(value) -> Fraction:
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if not isinstance(value, str):
        raise ValueError(f"expected an integer or a 'p/q' string, got {value!r}")
    m = _Q.fullmatch(value)
    if not m:
        raise ValueError(f"not an exact rational: {value!r}")
    den = int(m.group(2) or 1)
    if den == 0:
        raise ValueError(f"zero denominator in {value!r}")
    return Fraction(int(m.group(1)), den)


def format_q(x) -> str:
    return str(Fraction(x))
