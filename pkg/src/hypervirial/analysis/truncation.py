"""Optimal (smallest-term) truncation of the divergent eigenvalue series."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from ..engine import EnergySeries
from ..errors import DomainError
from ._mp import to_mpf

DEFAULT_PREC = 256


@dataclass(frozen=True)
class TruncationResult:
    g: float
    value: mpmath.mpf
    K_star: int
    error_bound: mpmath.mpf
    prec: int


def _log2(value: Fraction) -> float:
    return math.log2(abs(value.numerator)) - math.log2(value.denominator)


def optimal_truncation(series: EnergySeries, g: float, *, prec: int = DEFAULT_PREC) -> TruncationResult:
    """Sum ``eps(k) g^k`` for ``k <= K_star``, stopping before the smallest term.

    The smallest-magnitude term among ``k >= 1`` (ties to the lower order) is
    the first omitted one, ``K_star + 1``, and its magnitude is returned as
    ``error_bound``.  Terms are compared exactly; the working precision is
    raised above ``prec`` when needed to keep the accumulated rounding below
    1% of ``error_bound``.
    """
    if g < 0:
        raise DomainError(f"coupling must be non-negative, got {g}")
    if len(series) < 2:
        raise DomainError("optimal truncation needs at least two coefficients")
    exact_g = Fraction(g)
    terms = [Fraction(c) * exact_g**k for k, c in enumerate(series.coefficients)]
    sizes = [abs(t) for t in terms]
    first_omitted = min(range(1, len(terms)), key=lambda k: (sizes[k], k))
    k_star = first_omitted - 1
    bound = sizes[first_omitted]

    work = prec
    if bound:
        largest = max(s for s in sizes[: k_star + 1] if s) if any(sizes[: k_star + 1]) else bound
        needed = _log2(largest) - _log2(bound) + math.log2(100 * (k_star + 2)) + 8
        work = max(prec, math.ceil(needed))
    with mpmath.workprec(work):
        total = mpmath.mpf(0)
        for t in terms[: k_star + 1]:
            total += to_mpf(t, work)
        return TruncationResult(float(g), +total, k_star, to_mpf(bound, work), work)
