"""Rayleigh-Schrödinger perturbation theory with a polynomial ansatz.

For the lowest state of each ``l`` the unperturbed radial function is a
single envelope, ``x^(l+1) exp(-x/(2(l+1)))`` (Coulomb kind) or
``x^(l+1) exp(-x²/2)`` (oscillator kind).  Writing the order-``k``
correction as ``envelope * P_k(t)`` with ``t = x`` (Coulomb) or ``t = x²``
(oscillator) turns

    (H0 - eps(0)) y_k = sum_{q=1..k} eps(q) y_{k-q} - V1 y_{k-1}

into a bidiagonal linear system for the coefficients of ``P_k`` plus one
equation fixing ``eps(k)``.  Intermediate normalization ``P_k(0) = 0`` is
used for ``k >= 1``.

This module shares nothing with the moment recursion except the closed-form
unperturbed eigenvalue.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .engine import EnergySeries
from .errors import DomainError, OracleFailure, UnsupportedStateError
from .families import PotentialFamily, QuantumState, eps0

__all__ = ["WavefunctionAnsatz", "rspt_series", "rspt_ansatz", "ORACLE_LIMIT"]

ORACLE_LIMIT = 30

Poly = list  # coefficient list in t, lowest power first


@dataclass(frozen=True)
class WavefunctionAnsatz:
    family: PotentialFamily
    l: int
    envelope: str
    polynomial_corrections: tuple[tuple[Fraction, ...], ...]


def _envelope(family: PotentialFamily, l: int) -> str:
    if family.is_coulomb:
        return f"x^{l + 1} * exp(-x/{2 * (l + 1)})"
    return f"x^{l + 1} * exp(-x^2/2)"


def _operator(family: PotentialFamily, l: int):
    """Coefficients of ``(H0 - eps0)(envelope * t^m) / envelope``.

    Returns ``(lower, same)`` so that ``t^m`` maps to
    ``lower(m) t^(m-1) + same(m) t^m``.  For the Coulomb kind this is the
    image multiplied by x, which keeps it polynomial.
    """
    if family.is_coulomb:
        inv_n = Fraction(1, l + 1)
        return (lambda m: -m * (m + 2 * l + 1)), (lambda m: m * inv_n)
    return (lambda m: -2 * m * (2 * m + 2 * l + 1)), (lambda m: 4 * m)


def _apply(family: PotentialFamily, l: int, poly: Poly) -> Poly:
    """``(H0 - eps0)(envelope * P) / envelope`` expressed in powers of t.

    For the Coulomb kind the result is multiplied by x so it stays polynomial.
    """
    lower, same = _operator(family, l)
    out = [Fraction(0)] * (len(poly) + 1)
    for m, a in enumerate(poly):
        if not a:
            continue
        if m >= 1:
            out[m - 1] += lower(m) * a
        out[m] += same(m) * a
    return out


def _shift(poly: Poly, power: int) -> Poly:
    return [Fraction(0)] * power + list(poly)


def _add_into(acc: Poly, poly: Poly, scale) -> None:
    if len(acc) < len(poly):
        acc.extend([Fraction(0)] * (len(poly) - len(acc)))
    for i, c in enumerate(poly):
        if c:
            acc[i] += scale * c


def _trim(poly: Poly) -> Poly:
    poly = list(poly)
    while poly and not poly[-1]:
        poly.pop()
    return poly


def _source(family: PotentialFamily, polys: list[Poly], eps: list[Fraction], k: int) -> Poly:
    """Known part of the right-hand side (``eps(k)`` excluded), in the operator's frame."""
    rhs: Poly = []
    for q in range(1, k):
        _add_into(rhs, polys[k - q], eps[q])
    _add_into(rhs, _shift(polys[k - 1], family.p), -1)
    return _shift(rhs, 1) if family.is_coulomb else rhs


def rspt_ansatz(family: PotentialFamily, l: int, r0: int, *, oracle_limit: int = ORACLE_LIMIT):
    """Energy coefficients and polynomial corrections up to order ``r0``."""
    if l < 0:
        raise DomainError(f"l must be >= 0, got {l}")
    if r0 < 0:
        raise DomainError(f"r0 must be >= 0, got {r0}")
    if r0 > oracle_limit:
        raise DomainError(f"r0 = {r0} exceeds the oracle limit {oracle_limit}")
    lower, same = _operator(family, l)
    shift = 1 if family.is_coulomb else 0
    eps = [eps0(family, QuantumState(0, l))]
    polys: list[Poly] = [[Fraction(1)]]
    degree = 0
    for k in range(1, r0 + 1):
        degree += family.p + 1
        src = _source(family, polys, eps, k)
        src.extend([Fraction(0)] * (degree + 1 - len(src)))
        # unknowns a_1..a_D and eps(k); one equation per power t^0..t^D
        unknowns, equations = degree + 1, degree + 1
        if unknowns != equations or len(src) != degree + 1:
            raise OracleFailure(f"order {k}: {unknowns} unknowns vs {equations} equations")
        # eq_m: lower(m+1) a_{m+1} + same(m) a_m = src[m - shift] (+ eps(k) when m == shift)
        a = [Fraction(0)] * (degree + 2)
        for m in range(degree, shift, -1):
            a[m] = (src[m] - lower(m + 1) * a[m + 1]) / same(m)
        for m in range(shift):
            a[m + 1] = (src[m] - same(m) * a[m]) / lower(m + 1)
        eps_k = lower(shift + 1) * a[shift + 1] + same(shift) * a[shift] - src[shift]
        eps.append(eps_k)
        poly = _trim(a[: degree + 1])
        # independent residual: apply the operator to P_k and compare with the full RHS
        rhs = list(src)
        rhs[shift] += eps_k
        residual = _apply(family, l, poly)
        _add_into(residual, rhs, -1)
        if any(residual):
            worst = max(i for i, c in enumerate(residual) if c)
            raise OracleFailure(f"order {k}: nonzero residual at power {worst}")
        if poly and poly[0]:
            raise OracleFailure(f"order {k}: intermediate normalization violated")
        polys.append(poly)
    ansatz = WavefunctionAnsatz(
        family, l, _envelope(family, l), tuple(tuple(p) for p in polys)
    )
    return eps, ansatz


def rspt_series(
    family: PotentialFamily,
    l: int,
    r0: int,
    *,
    n: int = 0,
    oracle_limit: int = ORACLE_LIMIT,
) -> EnergySeries:
    """Coefficients ``eps(0..r0)`` of the nodeless state with angular momentum ``l``."""
    if n != 0:
        raise UnsupportedStateError("the polynomial ansatz only represents nodeless (n = 0) states")
    start = time.perf_counter()
    eps, _ = rspt_ansatz(family, l, r0, oracle_limit=oracle_limit)
    return EnergySeries(
        family,
        QuantumState(0, l),
        tuple(eps),
        method="rspt",
        metadata={"wall_time": time.perf_counter() - start},
    )
