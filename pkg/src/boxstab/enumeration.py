"""Explicit bijections N -> Q and N -> Q^d, fixed bit-exactly.

The one-dimensional enumeration is the signed Calkin-Wilf order:

    s(1)      = 0
    s(2j)     = cw(j)
    s(2j + 1) = -cw(j)          for j >= 1

where cw(1), cw(2), ... is the Calkin-Wilf sequence of positive rationals:
cw(1) = 1 and cw(j+1) = 1 / (2*floor(cw(j)) - cw(j) + 1).  Equivalently,
cw(j) is the j-th node of the Calkin-Wilf tree in breadth-first order, which
gives O(log j) random access: strip the leading 1 bit of j and walk the
remaining bits from the root 1/1, bit 0 -> left child a/(a+b), bit 1 ->
right child (a+b)/b.  So the sequence starts

    0, 1, -1, 1/2, -1/2, 2, -2, 1/3, -1/3, 3/2, ...

The d-dimensional enumeration unpairs the index with the Cantor pairing
function (1-based) and applies s componentwise:

    point(n, 1) = (s(n),)
    point(n, d) = (s(a),) ++ point(b, d-1)   where (a, b) = unpair(n)

with pair(x, y) = (x+y-2)(x+y-1)/2 + y and unpair its inverse.  Both
directions are exposed, so indices round-trip and certificates that mention
an index can be checked independently.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterator


def _check_index(index: int) -> None:
    if index < 1:
        raise ValueError(f"enumeration index must be >= 1, got {index}")


@lru_cache(maxsize=1 << 16)
def calkin_wilf(j: int) -> Fraction:
    """j-th positive rational in Calkin-Wilf (breadth-first tree) order."""
    _check_index(j)
    num, den = 1, 1
    for bit in bin(j)[3:]:
        if bit == "0":
            den = num + den
        else:
            num = num + den
    return Fraction(num, den)


def calkin_wilf_index(q: Fraction) -> int:
    """Inverse of `calkin_wilf` for positive rationals."""
    if q <= 0:
        raise ValueError(f"Calkin-Wilf enumerates positive rationals, got {q}")
    num, den = q.numerator, q.denominator
    bits: list[str] = []
    while (num, den) != (1, 1):
        if num > den:
            bits.append("1")
            num -= den
        else:
            bits.append("0")
            den -= num
    return int("1" + "".join(reversed(bits)), 2)


def rational_at(index: int) -> Fraction:
    """Signed Calkin-Wilf value at a 1-based index."""
    _check_index(index)
    if index == 1:
        return Fraction(0)
    j, odd = divmod(index, 2)
    value = calkin_wilf(j)
    return -value if odd else value


def rational_index(q: Fraction) -> int:
    """Inverse of `rational_at`."""
    q = Fraction(q)
    if q == 0:
        return 1
    j = calkin_wilf_index(abs(q))
    return 2 * j + 1 if q < 0 else 2 * j


def signed_rationals(start: int = 1) -> Iterator[tuple[int, Fraction]]:
    """Iterate (index, value) pairs from `start` onward in O(1) work per step
    (Newman's successor formula), instead of re-walking tree paths."""
    _check_index(start)
    index = start
    if index == 1:
        yield 1, Fraction(0)
        index = 2
    j = index // 2
    q = calkin_wilf(j)
    while True:
        if index % 2 == 0:
            yield index, q
        else:
            yield index, -q
            j += 1
            q = 1 / (2 * (q.numerator // q.denominator) - q + 1)
        index += 1


def pair(x: int, y: int) -> int:
    """Cantor pairing, 1-based: a bijection N+ x N+ -> N+."""
    _check_index(x)
    _check_index(y)
    s = x + y - 2
    return s * (s + 1) // 2 + y


def unpair(n: int) -> tuple[int, int]:
    """Inverse of `pair`."""
    _check_index(n)
    m = n - 1
    w = (isqrt(8 * m + 1) - 1) // 2
    t = w * (w + 1) // 2
    y = m - t
    return w - y + 1, y + 1


def rational_point_at(index: int, d: int) -> tuple[Fraction, ...]:
    """Point of Q^d at a 1-based index under the iterated-pairing bijection."""
    _check_index(index)
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if d == 1:
        return (rational_at(index),)
    a, b = unpair(index)
    return (rational_at(a),) + rational_point_at(b, d - 1)


def point_index(point: tuple[Fraction, ...]) -> int:
    """Inverse of `rational_point_at` (the dimension is the tuple length)."""
    if not point:
        raise ValueError("point must have at least one coordinate")
    if len(point) == 1:
        return rational_index(point[0])
    return pair(rational_index(point[0]), point_index(point[1:]))


def component_indices(index: int, d: int) -> tuple[int, ...]:
    """The d per-coordinate enumeration indices packed into `index`."""
    _check_index(index)
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if d == 1:
        return (index,)
    a, b = unpair(index)
    return (a,) + component_indices(b, d - 1)
