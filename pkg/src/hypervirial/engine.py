"""Moment-recursion engine for the perturbative eigenvalue coefficients.

The expectation values ``<x^j>`` of the perturbed state are expanded in
powers of g, ``<x^j> = sum_k x_j^(k) g^k``.  The hypervirial relations tie
each column ``x_.^(k)`` to itself (a three-term recurrence in ``j``) and to
earlier columns (an inhomogeneous term), while the Hellmann-Feynman relation
gives ``eps(k) = x_p^(k-1) / k``.  Columns are filled one order at a time.

For the oscillator kind the index ``j`` refers to even moments,
``x_j -> <x^(2j)>``.

Storage is column-major, entries are canonical ``gmpy2.mpq``.  The O(r0^3)
convolution sums run as integer dot products: every finished column is also
kept as integer numerators over one column-wide denominator (row-major, so a
fixed ``j`` reads one contiguous list).
"""

from __future__ import annotations

import math
import operator
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import gmpy2
from gmpy2 import mpq, mpz

from .errors import DomainError, InternalConsistencyError
from .families import (
    PotentialFamily,
    QuantumState,
    coefficient_parts,
    eps0,
    recursion_coefficients,
)

__all__ = [
    "EnergySeries",
    "MomentTable",
    "order0_column",
    "inhomogeneous_term",
    "orderk_column",
    "initial_table",
    "moment_table",
    "energy_series",
    "hv_residuals",
    "hf_mismatches",
    "sign_violations",
    "column_width",
]


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def column_width(family: PotentialFamily, r0: int, k: int) -> int:
    """Largest moment index stored in column ``k`` of an order-``r0`` table.

    Column k-1 must reach ``step`` indices further than column k (the
    g-term), and the last column must contain ``x_p`` for ``eps(r0)``.
    """
    p = family.p
    if family.is_coulomb:
        return p * (r0 - k)
    return p + (p - 1) * (r0 - 1 - k)


@dataclass(frozen=True)
class EnergySeries:
    family: PotentialFamily
    state: QuantumState
    coefficients: tuple[Fraction, ...]
    method: str = "hfhv"
    metadata: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, k):
        return self.coefficients[k]

    def __iter__(self):
        return iter(self.coefficients)

    def scaled(self, base) -> list[Fraction]:
        """``base**k * eps(k)``; ``scaled(4)`` is the convention of quartic tables."""
        base = Fraction(base)
        return [c * base**k for k, c in enumerate(self.coefficients)]

    def prefix(self, r0: int) -> "EnergySeries":
        if r0 > self.order:
            raise DomainError(f"series has order {self.order}, cannot take prefix {r0}")
        return EnergySeries(self.family, self.state, self.coefficients[: r0 + 1], self.method)


class MomentTable:
    """Triangular table of moment coefficients ``x_j^(k)``.

    Column ``k`` holds ``j`` from :attr:`j_min` (-1 for the Coulomb kind,
    0 for the oscillator kind) up to :meth:`width`.  Columns are appended
    by :func:`orderk_column`; a freshly constructed table is empty.
    """

    def __init__(self, family: PotentialFamily, state: QuantumState, order: int):
        if order < 0:
            raise DomainError(f"order must be >= 0, got {order}")
        self.family = family
        self.state = state
        self.order = order
        self.j_min = -1 if family.is_coulomb else 0
        self._off = -self.j_min
        self._e0 = mpq(eps0(family, state))
        self._cols: list[list] = []
        self._eps: list = [self._e0]
        n_rows = column_width(family, order, 0) + self._off + 1 if order > 0 else 0
        self._rows: list[list] = [[] for _ in range(n_rows)]
        self._dens: list = []
        self._coef: list[tuple] = []
        self._weights_cache: tuple | None = None

    # -- layout --------------------------------------------------------------

    def width(self, k: int) -> int:
        return column_width(self.family, self.order, k)

    @property
    def columns(self) -> int:
        """Number of completed columns."""
        return len(self._cols)

    def __contains__(self, key) -> bool:
        j, k = key
        return 0 <= k < len(self._cols) and self.j_min <= j <= self.width(k)

    def entry(self, j: int, k: int) -> Fraction:
        return _to_fraction(self._get(j, k))

    def _get(self, j: int, k: int):
        if (j, k) not in self:
            raise InternalConsistencyError(
                f"moment x_{j}^({k}) is not in the table (columns={self.columns}, order={self.order})"
            )
        return self._cols[k][j + self._off]

    def column(self, k: int) -> list[Fraction]:
        if not 0 <= k < len(self._cols):
            raise InternalConsistencyError(f"column {k} not computed")
        return [_to_fraction(v) for v in self._cols[k]]

    def keys(self) -> Iterator[tuple[int, int]]:
        for k in range(len(self._cols)):
            for j in range(self.j_min, self.width(k) + 1):
                yield j, k

    @property
    def entries(self) -> dict[tuple[int, int], Fraction]:
        return {(j, k): self.entry(j, k) for j, k in self.keys()}

    def epsilon(self, k: int) -> Fraction:
        if not 0 <= k < len(self._eps):
            raise InternalConsistencyError(f"eps({k}) not available yet")
        return _to_fraction(self._eps[k])

    @property
    def epsilons(self) -> list[Fraction]:
        return [_to_fraction(e) for e in self._eps]

    # -- internals -------------------------------------------------------------

    def _coefficients(self, index: int):
        while len(self._coef) <= index:
            parts = coefficient_parts(self.family, len(self._coef), self.state.l)
            self._coef.append(tuple(mpq(num, den) for num, den in parts))
        return self._coef[index]

    def _commit(self, values: list) -> None:
        k = len(self._cols)
        if len(values) != self.width(k) + self._off + 1:
            raise InternalConsistencyError(f"column {k} has {len(values)} entries")
        den = mpz(1)
        for v in values:
            den = gmpy2.lcm(den, v.denominator)
        for row, v in zip(self._rows, values):
            row.append(v.numerator * (den // v.denominator))
        self._dens.append(den)
        self._cols.append(values)
        # Hellmann-Feynman: d eps / dg = <x^p>, one order down.
        self._eps.append(values[self.family.p + self._off] / (k + 1))
        self._weights_cache = None

    def _weights(self, k: int):
        """Common denominator and integer weights for sum_q eps(k-q) x_j^(q)."""
        if self._weights_cache is not None and self._weights_cache[0] == k:
            return self._weights_cache[1:]
        eps, dens = self._eps, self._dens
        common = mpz(1)
        for q in range(k):
            common = gmpy2.lcm(common, eps[k - q].denominator * dens[q])
        weights = [
            eps[k - q].numerator * (common // (eps[k - q].denominator * dens[q])) for q in range(k)
        ]
        self._weights_cache = (k, common, weights)
        return common, weights

    def _convolution(self, j: int, k: int):
        """Exact ``sum_{q=0}^{k-1} eps(k-q) x_j^(q)`` as an mpq."""
        common, weights = self._weights(k)
        row = self._rows[j + self._off]
        if len(row) > k:
            row = row[:k]
        total = sum(map(operator.mul, weights, row), mpz(0))
        return mpq(total, common)

    def _check_dependencies(self, j: int, k: int) -> None:
        if k < 1:
            raise InternalConsistencyError("the inhomogeneous term exists only for k >= 1")
        if len(self._cols) < k or len(self._eps) <= k:
            raise InternalConsistencyError(f"columns 0..{k - 1} must be complete before order {k}")
        reach = j + self.family.step
        if not (self.j_min <= j and reach <= self.width(k - 1)):
            raise InternalConsistencyError(
                f"delta({j},{k}) needs x_{reach}^({k - 1}), outside column width {self.width(k - 1)}"
            )


# -- public operations ---------------------------------------------------------


def _order0_values(family: PotentialFamily, state: QuantumState, j_max: int, coef) -> list:
    e0 = mpq(eps0(family, state))
    if family.is_coulomb:
        col = [-2 * e0, mpq(1)]
        inv = 1 / e0
        for j in range(1, j_max + 1):
            alpha, beta, _ = coef(j)
            col.append((alpha * col[j - 1] + beta * col[j]) * inv)
        return col
    col = [mpq(1), e0 / 2]
    for i in range(1, j_max):
        alpha, beta, _ = coef(i)
        if beta <= 0:
            raise InternalConsistencyError(f"beta_{i} = {beta} is not positive")
        col.append((e0 * col[i] - alpha * col[i - 1]) / beta)
    return col


def order0_column(family: PotentialFamily, state: QuantumState, j_max: int) -> list[Fraction]:
    """Unperturbed moments ``x_j^(0)`` for ``j = j_min .. j_max``.

    For the Coulomb kind the list starts at ``j = -1``.
    """
    if j_max < 1:
        raise DomainError(f"j_max must be >= 1, got {j_max}")
    scratch = MomentTable(family, state, 0)
    return [_to_fraction(v) for v in _order0_values(family, state, j_max, scratch._coefficients)]


def inhomogeneous_term(table: MomentTable, j: int, k: int) -> Fraction:
    """The part of the order-``k`` relation at index ``j`` built from lower orders."""
    table._check_dependencies(j, k)
    return _to_fraction(_delta(table, j, k))


def _delta(table: MomentTable, j: int, k: int):
    _, _, gamma = table._coefficients(j)
    shifted = table._cols[k - 1][j + table.family.step + table._off]
    conv = table._convolution(j, k)
    if table.family.is_coulomb:
        return gamma * shifted - conv
    return conv - gamma * shifted


def orderk_column(table: MomentTable, k: int) -> None:
    """Append column ``k`` (``k >= 1``) to ``table``."""
    if k < 1:
        raise DomainError("order-0 column is produced by order0_column")
    if table.columns != k:
        raise InternalConsistencyError(f"table has {table.columns} columns, cannot add column {k}")
    if k >= table.order:
        raise DomainError(f"column {k} is beyond the table order {table.order}")
    fam, off, step = table.family, table._off, table.family.step
    width = table.width(k)
    table._check_dependencies(width - (0 if fam.is_coulomb else 1), k)
    prev = table._cols[k - 1]
    x_step = prev[step + off]
    inv_k = mpq(1, k)
    e0 = table._e0
    if fam.is_coulomb:
        _, _, gamma0 = table._coefficients(0)
        col = [2 * (gamma0 - inv_k) * x_step, mpq(0)]
        inv = 1 / e0
        for j in range(1, width + 1):
            alpha, beta, _ = table._coefficients(j)
            col.append((alpha * col[j - 1] + beta * col[j] + _delta(table, j, k)) * inv)
    else:
        _, _, gamma0 = table._coefficients(0)
        col = [mpq(0), (inv_k - gamma0) / 2 * x_step]
        for i in range(1, width):
            alpha, beta, _ = table._coefficients(i)
            col.append((e0 * col[i] - alpha * col[i - 1] + _delta(table, i, k)) / beta)
    table._commit(col)


def initial_table(family: PotentialFamily, state: QuantumState, r0: int) -> MomentTable:
    """An order-``r0`` table holding only the unperturbed column (empty if ``r0 == 0``)."""
    table = MomentTable(family, state, r0)
    if r0 > 0:
        table._commit(_order0_values(family, state, table.width(0), table._coefficients))
    return table


def moment_table(family: PotentialFamily, state: QuantumState, r0: int) -> MomentTable:
    """Build the complete order-``r0`` table (columns ``0 .. r0-1``)."""
    table = initial_table(family, state, r0)
    if r0 == 0:
        return table
    for k in range(1, r0):
        orderk_column(table, k)
    if len(table._eps) != r0 + 1:
        raise InternalConsistencyError(f"expected {r0 + 1} coefficients, got {len(table._eps)}")
    return table


def energy_series(family: PotentialFamily, state: QuantumState, r0: int) -> EnergySeries:
    """Exact coefficients ``eps(0..r0)`` of the eigenvalue expansion in g."""
    if r0 < 0:
        raise DomainError(f"r0 must be >= 0, got {r0}")
    start = time.perf_counter()
    table = moment_table(family, state, r0)
    coefficients = tuple(table.epsilons)
    return EnergySeries(
        family,
        state,
        coefficients,
        metadata={"wall_time": time.perf_counter() - start},
    )


# -- post-hoc checks -----------------------------------------------------------


def hv_residuals(table: MomentTable) -> list[tuple[int, int, Fraction]]:
    """Re-evaluate every hypervirial balance of the table in plain Fractions.

    Returns the ``(j, k, residual)`` triples with a nonzero residual; an
    empty list means the table satisfies all relations exactly.
    """
    fam, step = table.family, table.family.step
    eps = table.epsilons
    bad = []
    for k in range(table.columns):
        top = table.width(k) if fam.is_coulomb else table.width(k) - 1
        for j in range(0, top + 1):
            c = recursion_coefficients(fam, j, table.state.l)
            lhs = sum(eps[k - q] * table.entry(j, q) for q in range(k + 1))
            if fam.is_coulomb:
                rhs = c.beta * table.entry(j - 1, k)
                if c.alpha:
                    rhs += c.alpha * table.entry(j - 2, k)
            else:
                rhs = c.beta * table.entry(j + 1, k)
                if c.alpha:
                    rhs += c.alpha * table.entry(j - 1, k)
            if k >= 1:
                rhs += c.gamma * table.entry(j + step, k - 1)
            if lhs != rhs:
                bad.append((j, k, lhs - rhs))
    return bad


def hf_mismatches(table: MomentTable) -> list[int]:
    """Orders ``k`` where ``k * eps(k)`` differs from ``x_p^(k-1)``."""
    p = table.family.p
    return [
        k
        for k in range(1, table.columns + 1)
        if k * table.epsilon(k) != table.entry(p, k - 1)
    ]


def normalization_violations(table: MomentTable) -> list[int]:
    return [
        k for k in range(table.columns) if table.entry(0, k) != (1 if k == 0 else 0)
    ]


def sign_violations(series: EnergySeries) -> list[int]:
    """Orders ``k >= 1`` where ``sign(eps(k)) != (-1)^(k+1)``."""
    return [
        k
        for k, c in enumerate(series.coefficients)
        if k >= 1 and not ((c > 0) if k % 2 else (c < 0))
    ]


def digits(value: Fraction) -> int:
    """Decimal digit count of the larger of numerator and denominator."""
    biggest = max(abs(value.numerator), value.denominator)
    return 1 if biggest == 0 else int(math.log10(biggest)) + 1
