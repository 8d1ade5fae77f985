"""Small JSON helpers shared by the report classes and the I/O layer."""
from __future__ import annotations

import math
from fractions import Fraction


def encode_label(label):
    if isinstance(label, tuple):
        return [encode_label(p) for p in label]
    if isinstance(label, Fraction):
        return encode_number(label)
    return label


def decode_label(obj):
    if isinstance(obj, list):
        return tuple(decode_label(p) for p in obj)
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else obj
    return obj


def encode_simplex(s) -> list:
    return [encode_label(v) for v in s]


def encode_number(x):
    """Exact integers stay integers; everything else becomes a float (inf as the string "inf")."""
    if x is None:
        return None
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    if isinstance(x, int):
        return x
    return float(x)


def encode_exact(x):
    """Like :func:`encode_number` but falls back to a ``"p/q"`` string when a float would round."""
    if isinstance(x, Fraction) and x.denominator != 1:
        f = float(x)
        return f if Fraction(repr(f)) == x else f"{x.numerator}/{x.denominator}"
    return encode_number(x)
