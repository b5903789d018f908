"""Extraction of the growth law ``eps(k) ~ (-1)^(k+1) Gamma(k+b) a^k``.

Under that law the coefficient ratios are exactly linear in k,

    r_k = -eps(k+1) / eps(k) = a (k + b) + O(1/k),

so ``r_k - r_(k-1) -> a`` and ``r_k / a - k -> b``.  Both limits are
accelerated with Richardson extrapolation in ``1/k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from ..engine import EnergySeries
from ..errors import DegenerateSeriesError, DomainError, FitUnreliableError
from ._mp import to_mpf

MIN_WINDOW = 10


def ratio_sequence(series: EnergySeries, prec: int = 53) -> list[mpmath.mpf]:
    """Ratios ``r_k = -eps(k+1)/eps(k)`` for ``k = 1 .. len(series) - 2``.

    Element ``i`` of the result is ``r_(i+1)``.  Each ratio is formed exactly
    and rounded once to ``prec`` bits.
    """
    if len(series) < 3:
        raise DomainError("ratio sequence needs at least three coefficients")
    return [_ratio(series, k, prec) for k in range(1, len(series) - 1)]


def _ratio(series: EnergySeries, k: int, prec: int) -> mpmath.mpf:
    if series[k] == 0:
        raise DegenerateSeriesError(f"eps({k}) is zero")
    return to_mpf(-Fraction(series[k + 1]) / series[k], prec)


def richardson(values, start: int, order: int):
    """Richardson extrapolation of ``s_k = s + c_1/k + ... + c_m/k^m``.

    ``values[i]`` is ``s_(start+i)``; the last ``order + 1`` entries are used.
    """
    m = order
    if len(values) < m + 1:
        raise DomainError(f"Richardson order {m} needs {m + 1} samples, got {len(values)}")
    base = start + len(values) - (m + 1)
    total = 0
    for i in range(m + 1):
        sign = -1 if (i + m) % 2 else 1
        weight = mpmath.mpf(base + i) ** m / (math.factorial(i) * math.factorial(m - i))
        total += sign * weight * values[len(values) - (m + 1) + i]
    return total


@dataclass
class FitDiagnostics:
    ks: list[int]
    ratios: list[float]
    differences: list[float]  # r_k - r_(k-1), aligned with ks[1:]
    b_raw: list[float]  # r_k / a - k, aligned with ks
    a_trace: list[float] = field(default_factory=list)  # extrapolated a, increasing end point
    b_trace: list[float] = field(default_factory=list)
    residuals: list[float] = field(default_factory=list)  # r_k - a (k + b)


@dataclass
class AsymptoticFit:
    a: float
    b: float
    window: tuple[int, int]
    richardson_order: int
    diagnostics: FitDiagnostics


def fit_gamma_growth(
    series: EnergySeries,
    window: tuple[int, int],
    *,
    richardson_order: int = 2,
    prec: int = 113,
) -> AsymptoticFit:
    """Estimate ``(a, b)`` from ratios ``r_k`` with ``k`` inside ``window``."""
    k_lo, k_hi = window
    top = len(series) - 2
    if not 1 <= k_lo <= k_hi <= top:
        raise DomainError(f"window {window} is outside the available ratio range 1..{top}")
    if k_hi - k_lo + 1 < MIN_WINDOW:
        raise FitUnreliableError(f"window {window} is shorter than {MIN_WINDOW}")
    if k_hi - k_lo < richardson_order + 1:
        raise FitUnreliableError(f"window {window} too short for Richardson order {richardson_order}")

    with mpmath.workprec(prec):
        r = [_ratio(series, k, prec) for k in range(k_lo, k_hi + 1)]
        ks = list(range(k_lo, k_hi + 1))
        diffs = [r[i] - r[i - 1] for i in range(1, len(r))]
        diagnostics = FitDiagnostics(
            ks=ks,
            ratios=[float(v) for v in r],
            differences=[float(v) for v in diffs],
            b_raw=[],
        )
        if any(d <= 0 for d in diffs):
            bad = [ks[i + 1] for i, d in enumerate(diffs) if d <= 0]
            raise FitUnreliableError(f"ratio sequence is not increasing at k = {bad[:5]}", diagnostics)

        m = richardson_order
        a = richardson(diffs, k_lo + 1, m)
        b_seq = [r[i] / a - ks[i] for i in range(len(ks))]
        b = richardson(b_seq, k_lo, m)

        diagnostics.b_raw = [float(v) for v in b_seq]
        for end in range(m + 1, len(diffs) + 1):
            diagnostics.a_trace.append(float(richardson(diffs[:end], k_lo + 1, m)))
        for end in range(m + 1, len(b_seq) + 1):
            diagnostics.b_trace.append(float(richardson(b_seq[:end], k_lo, m)))
        diagnostics.residuals = [float(r[i] - a * (ks[i] + b)) for i in range(len(ks))]

    if not a > 0:
        raise FitUnreliableError(f"extrapolated growth base a = {float(a)} is not positive", diagnostics)
    return AsymptoticFit(float(a), float(b), (k_lo, k_hi), m, diagnostics)
