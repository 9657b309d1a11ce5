"""Exact rational scalar used for every payment, budget, residual and time value.

All money arithmetic in this package is exact: no floats enter any rule,
checker, or LP. gmpy2's mpq is used when available (it is much faster than
fractions.Fraction); the stdlib Fraction is a drop-in fallback.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as ExactRational
except ImportError:  # pragma: no cover
    from fractions import Fraction as ExactRational

ZERO = ExactRational(0)
ONE = ExactRational(1)


def rat(numerator, denominator=1) -> ExactRational:
    """Build an exact rational; denominator must be nonzero."""
    return ExactRational(numerator) / ExactRational(denominator)


def parse_rational(text: str) -> ExactRational:
    """Parse 'num/den' or 'num' into an exact rational.

    Raises ValueError on malformed input or a zero denominator.
    """
    s = text.strip()
    if "/" in s:
        num_s, den_s = s.split("/", 1)
        num, den = int(num_s), int(den_s)
        if den == 0:
            raise ValueError(f"zero denominator in rational {text!r}")
        return rat(num, den)
    return ExactRational(int(s))


def format_rational(q) -> str:
    """Serialize as 'num/den' (always includes the denominator)."""
    q = ExactRational(q)
    return f"{q.numerator}/{q.denominator}"
