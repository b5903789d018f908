"""Potential families, quantum states and the closed forms tied to them.

Two scaled radial Hamiltonians ``-d²/dx² + U(x)`` are supported::

    coulomb:    U(x) = -1/x + l(l+1)/x² + g x^p        (p >= 1, Cornell is p = 1)
    oscillator: U(x) =  x²  + l(l+1)/x² + g x^(2p)     (p >= 2, quartic is p = 2)
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

__all__ = [
    "PotentialKind",
    "PotentialFamily",
    "QuantumState",
    "PhysicalParams",
    "RecursionCoefficients",
    "CORNELL",
    "QUARTIC",
    "eps0",
    "recursion_coefficients",
    "physical_to_scaled",
    "family_from_name",
]


class PotentialKind(enum.Enum):
    COULOMB_PLUS_POWER = "coulomb_plus_power"
    OSCILLATOR_PLUS_EVEN_POWER = "oscillator_plus_even_power"


@dataclass(frozen=True)
class PotentialFamily:
    """Scaled potential descriptor.

    ``p`` is the exponent parameter of the perturbation: ``g x^p`` for the
    Coulomb kind and ``g x^(2p)`` for the oscillator kind.  It is also the
    index offset at which the g-proportional moment enters the moment
    recursion (the ``step``).
    """

    kind: PotentialKind
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise DomainError(f"p must be an integer, got {self.p!r}")
        minimum = 1 if self.is_coulomb else 2
        if self.p < minimum:
            raise DomainError(f"{self.kind.value} requires p >= {minimum}, got {self.p}")

    @property
    def is_coulomb(self) -> bool:
        return self.kind is PotentialKind.COULOMB_PLUS_POWER

    @property
    def step(self) -> int:
        return self.p

    @property
    def perturbation_power(self) -> int:
        """Power of x multiplying g in U(x)."""
        return self.p if self.is_coulomb else 2 * self.p

    @property
    def name(self) -> str:
        if self == CORNELL:
            return "cornell"
        if self == QUARTIC:
            return "quartic"
        return f"{'coulomb' if self.is_coulomb else 'oscillator'}-p{self.p}"

    def potential(self, x, l: int, g):
        """Evaluate U(x) in floating point (works elementwise on numpy arrays)."""
        centrifugal = l * (l + 1) / x**2
        if self.is_coulomb:
            return -1.0 / x + centrifugal + g * x**self.p
        return x**2 + centrifugal + g * x ** (2 * self.p)


CORNELL = PotentialFamily(PotentialKind.COULOMB_PLUS_POWER, 1)
QUARTIC = PotentialFamily(PotentialKind.OSCILLATOR_PLUS_EVEN_POWER, 2)


def family_from_name(name: str, p: int | None = None) -> PotentialFamily:
    """Resolve ``cornell``, ``quartic``, ``coulomb`` or ``oscillator`` (+ ``p``)."""
    name = name.lower()
    if name == "cornell":
        if p not in (None, 1):
            raise DomainError("the Cornell potential has p = 1")
        return CORNELL
    if name == "quartic":
        if p not in (None, 2):
            raise DomainError("the quartic oscillator has p = 2")
        return QUARTIC
    if name == "coulomb":
        return PotentialFamily(PotentialKind.COULOMB_PLUS_POWER, 1 if p is None else p)
    if name == "oscillator":
        return PotentialFamily(PotentialKind.OSCILLATOR_PLUS_EVEN_POWER, 2 if p is None else p)
    raise DomainError(f"unknown potential family {name!r}")


@dataclass(frozen=True)
class QuantumState:
    n: int = 0
    l: int = 0

    def __post_init__(self):
        for field, value in (("n", self.n), ("l", self.l)):
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise DomainError(f"{field} must be a non-negative integer, got {value!r}")

    @property
    def label(self) -> str:
        letters = "SPDFGHIKLMNOQRTUV"
        letter = letters[self.l] if self.l < len(letters) else f"[l={self.l}]"
        return f"{self.n + 1}{letter}"


@dataclass(frozen=True)
class PhysicalParams:
    """Physical parameters of ``V(r) = -alpha/r + beta r`` or ``a r² + b r⁴``.

    ``strength`` is the unperturbed coupling (alpha, resp. a) and
    ``perturbation`` the perturbing one (beta, resp. b).
    """

    mu: float
    strength: float
    perturbation: float

    def __post_init__(self):
        if not self.mu > 0:
            raise DomainError(f"reduced mass must be positive, got {self.mu}")
        if not self.strength > 0:
            raise DomainError(f"unperturbed strength must be positive, got {self.strength}")
        if not self.perturbation >= 0:
            raise DomainError(f"perturbing strength must be non-negative, got {self.perturbation}")


@dataclass(frozen=True)
class RecursionCoefficients:
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    step: int


def eps0(family: PotentialFamily, state: QuantumState) -> Fraction:
    """Unperturbed eigenvalue of the scaled Hamiltonian."""
    if family.is_coulomb:
        N = state.n + state.l + 1
        return Fraction(-1, 4 * N * N)
    return Fraction(3 + 4 * state.n + 2 * state.l)


def coefficient_parts(family: PotentialFamily, index: int, l: int):
    """Integer (numerator, denominator) pairs of alpha, beta, gamma.

    Obtained by inserting U(x) into the hypervirial identity
    ``2(j+1) e <x^j> = -j(j²-1)/2 <x^(j-2)> + 2(j+1) <x^j U> + <x^(j+1) U'>``;
    for the oscillator kind ``j = 2 * index``.
    """
    if index < 0:
        raise DomainError(f"recursion index must be >= 0, got {index}")
    p = family.p
    s = (2 * l + 1) ** 2
    if family.is_coulomb:
        j = index
        return (
            (j * (s - j * j), 4 * j + 4),
            (-(2 * j + 1), 2 * j + 2),
            (2 * j + 2 + p, 2 * j + 2),
        )
    i = index
    return (
        (i * (s - 4 * i * i), 4 * i + 2),
        (2 * i + 2, 2 * i + 1),
        (2 * i + 1 + p, 2 * i + 1),
    )


def recursion_coefficients(family: PotentialFamily, index: int, l: int) -> RecursionCoefficients:
    (an, ad), (bn, bd), (cn, cd) = coefficient_parts(family, index, l)
    return RecursionCoefficients(Fraction(an, ad), Fraction(bn, bd), Fraction(cn, cd), family.step)


def physical_to_scaled(family: PotentialFamily, params: PhysicalParams) -> tuple[float, float]:
    """Return ``(g, energy_scale)`` with ``E = energy_scale * eps``.

    Only the two reference families carry a physical parametrisation.
    """
    mu, s, t = params.mu, params.strength, params.perturbation
    if family == CORNELL:
        return t / ((2 * mu) ** 2 * s**3), 2 * mu * s**2
    if family == QUARTIC:
        return t / (math.sqrt(2 * mu) * s**1.5), math.sqrt(s / (2 * mu))
    raise DomainError(f"no physical parametrisation for {family.name}")
