"""Exact rational helpers shared across the package.

All arithmetic in this project is over arbitrary-precision rationals
(gmpy2.mpq); floats never appear anywhere.
"""

from __future__ import annotations

from gmpy2 import mpq

Rat = mpq


def rat(p, q=1) -> mpq:
    return mpq(p, q)


def parse_rat(text: str) -> mpq:
    """Parse "p/q" or "p" into an exact rational. Raises ValueError on q=0."""
    s = text.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        d = int(den)
        if d == 0:
            raise ValueError(f"zero denominator in rational {text!r}")
        return mpq(int(num), d)
    return mpq(int(s))


def fmt_rat(x) -> str:
    """Canonical string form: "p" for integers, otherwise "p/q" with q > 0, gcd 1."""
    q = mpq(x)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def is_integral(x) -> bool:
    return mpq(x).denominator == 1
