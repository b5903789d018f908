from fractions import Fraction

import mpmath
from mpmath.libmp import from_rational, round_nearest


def to_mpf(value: Fraction, prec: int) -> mpmath.mpf:
    """Correctly rounded conversion of an exact rational to ``prec`` bits."""
    value = Fraction(value)
    with mpmath.workprec(prec):
        return mpmath.mpf(from_rational(value.numerator, value.denominator, prec, round_nearest))
