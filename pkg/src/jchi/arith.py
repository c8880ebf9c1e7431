"""Exact integer and rational arithmetic.

Every Euler-characteristic value in this package is an exact rational.
Python's arbitrary-precision ``int`` and :class:`fractions.Fraction`
(always normalized: gcd 1, positive denominator) are the value types;
this module adds the number theory and linear algebra on top of them:
factorials, Bernoulli numbers, fraction-free integer determinants, and
the ``p/q`` serialization used by every file format and CLI command.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb
from math import factorial as _math_factorial

__all__ = [
    "Rational",
    "bernoulli",
    "factorial",
    "int_determinant",
    "format_rational",
    "parse_rational",
]

Rational = Fraction

# B_0, B_1, ... in the B_1 = -1/2 convention (so B_2 = 1/6, B_4 = -1/30).
_bernoulli_cache: list[Fraction] = [Fraction(1)]


def factorial(k: int) -> int:
    """k! as an exact integer, k >= 0."""
    if k < 0:
        raise ValueError(f"factorial of negative argument {k}")
    return _math_factorial(k)


def bernoulli(k: int) -> Fraction:
    """The Bernoulli number B_k, with B_1 = -1/2.

    Even values follow the B_2 = 1/6, B_4 = -1/30 convention; odd k >= 3
    give 0.  Computed by the recurrence

        B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j

    with all earlier values cached.
    """
    if k < 0:
        raise ValueError(f"Bernoulli number of negative index {k}")
    while len(_bernoulli_cache) <= k:
        m = len(_bernoulli_cache)
        acc = Fraction(0)
        for j, b in enumerate(_bernoulli_cache):
            acc += comb(m + 1, j) * b
        _bernoulli_cache.append(-acc / (m + 1))
    return _bernoulli_cache[k]


def int_determinant(matrix: list[list[int]]) -> int:
    """Exact determinant of a square integer matrix.

    Uses Bareiss fraction-free elimination, so every intermediate value
    is an integer and no rational blowup occurs.  The empty 0x0 matrix
    has determinant 1.
    """
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise ValueError("matrix is not square")
    if n == 0:
        return 1
    m = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for c in range(n - 1):
        pivot_row = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot_row is None:
            return 0
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            sign = -sign
        pivot = m[c][c]
        for r in range(c + 1, n):
            for cc in range(c + 1, n):
                m[r][cc] = (m[r][cc] * pivot - m[r][c] * m[c][cc]) // prev
            m[r][c] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


_RATIONAL_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def format_rational(q: Fraction | int) -> str:
    """Serialize in lowest terms: ``-1/12``; integers without ``/1``."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse the ``p/q`` or bare-integer form produced by format_rational."""
    match = _RATIONAL_RE.match(text.strip())
    if match is None:
        raise ValueError(f"not a rational in p/q form: {text!r}")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(num, den)
