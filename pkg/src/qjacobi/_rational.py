"""Exact rational coefficient type.

gmpy2's ``mpq`` is used when available (the compiled kernels require it);
otherwise :class:`fractions.Fraction`. Both compare and hash identically.
"""

from fractions import Fraction

try:
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _mpq = None

RATIONAL = _mpq if _mpq is not None else Fraction
HAVE_GMPY2 = _mpq is not None


def Q(value, den=1):
    """Coerce ``value`` (int, Fraction, mpq, or 'p/q' string) to the rational type."""
    if den != 1:
        return RATIONAL(value, den)
    if isinstance(value, RATIONAL):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction or string")
    if isinstance(value, Fraction):
        return RATIONAL(value.numerator, value.denominator)
    if isinstance(value, str):
        f = Fraction(value)
        return RATIONAL(f.numerator, f.denominator)
    return RATIONAL(value)


def to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


ZERO = Q(0)
ONE = Q(1)
