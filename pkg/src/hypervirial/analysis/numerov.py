"""Direct eigenvalues of the scaled radial equation by Numerov shooting.

The solution is started from its Frobenius series ``x^(l+1)(1 + c_1 x + ...)``
at ``x = h, 2h``, integrated outward with the Numerov scheme, and the energy is
bisected on the number of sign changes: an energy just above the
``n``-th eigenvalue produces ``n + 1`` sign changes on ``(0, x_max]``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import BracketError, ConvergenceError, DomainError
from ..families import PotentialFamily, QuantumState, eps0

_RESCALE = 1e150


@dataclass(frozen=True)
class SolverSettings:
    x_max: float | None = None
    step: float = 1e-3
    tol: float = 1e-10
    energy_range: tuple[float, float] | None = None
    max_iter: int = 200
    series_terms: int = 12

    def resolved(self, family: PotentialFamily, state: QuantumState, g: float) -> "SolverSettings":
        x_max = self.x_max
        if x_max is None:
            if family.is_coulomb:
                x_max = 40.0 * (state.n + state.l + 1)
            else:
                x_max = 10.0 + 2 * (state.n + state.l)
        energy_range = self.energy_range
        if energy_range is None:
            e0 = float(eps0(family, state))
            wall = g * x_max**family.perturbation_power
            if family.is_coulomb:
                energy_range = (e0 - 1.0, 1.0 + wall)
            else:
                energy_range = (0.0, e0 + 8.0 + wall)
        return replace(self, x_max=x_max, energy_range=energy_range)


@dataclass
class EigenState:
    energy: float
    x: np.ndarray
    y: np.ndarray
    nodes: int
    iterations: int


def _frobenius(family: PotentialFamily, l: int, g: float, energy: float, terms: int) -> list[float]:
    """Coefficients ``c_m`` of ``y = x^(l+1) sum_m c_m x^m``."""
    if family.is_coulomb:
        powers = {-1: -1.0, 0: -energy, family.p: g}
    else:
        powers = {0: -energy, 2: 1.0, 2 * family.p: g}
    c = [1.0]
    for m in range(1, terms):
        acc = 0.0
        for s, u in powers.items():
            idx = m - 2 - s
            if 0 <= idx < m and u:
                acc += u * c[idx]
        c.append(acc / (m * (m + 2 * l + 1)))
    return c


def _shoot(family, l, g, energy, x, potential, settings) -> tuple[np.ndarray, int]:
    h = settings.step
    c = _frobenius(family, l, g, energy, settings.series_terms)
    y = np.zeros_like(x)
    for i in (1, 2):
        xi = x[i]
        y[i] = xi ** (l + 1) * sum(cm * xi**m for m, cm in enumerate(c))
    w = (1.0 - h * h / 12.0 * (potential - energy)).tolist()
    ys = y.tolist()
    nodes = 0
    y_prev, y_cur = ys[1], ys[2]
    for i in range(2, len(ys) - 1):
        y_next = ((12.0 - 10.0 * w[i]) * y_cur - w[i - 1] * y_prev) / w[i + 1]
        if (y_next < 0.0) != (y_cur < 0.0) and y_next != 0.0:
            nodes += 1
        if abs(y_next) > _RESCALE:
            y_next /= _RESCALE
            y_cur /= _RESCALE
            for j in range(i + 1):
                ys[j] /= _RESCALE
        ys[i + 1] = y_next
        y_prev, y_cur = y_cur, y_next
    return np.asarray(ys), nodes


def radial_eigenstate(
    family: PotentialFamily,
    state: QuantumState,
    g: float,
    settings: SolverSettings | None = None,
) -> EigenState:
    """Eigenvalue and (unnormalised) eigenfunction with ``state.n`` interior nodes."""
    if g < 0:
        raise DomainError(f"coupling must be non-negative, got {g}")
    settings = (settings or SolverSettings()).resolved(family, state, g)
    if settings.step <= 0 or settings.x_max <= 0 or settings.tol <= 0:
        raise DomainError("solver step, x_max and tolerance must be positive")
    n_steps = int(round(settings.x_max / settings.step))
    x = np.arange(n_steps + 1) * settings.step
    with np.errstate(divide="ignore", invalid="ignore"):
        potential = family.potential(x, state.l, g)
    potential[0] = 0.0

    def count(energy):
        return _shoot(family, state.l, g, energy, x, potential, settings)

    lo, hi = settings.energy_range
    if count(lo)[1] > state.n or count(hi)[1] <= state.n:
        raise BracketError(f"no eigenvalue with {state.n} nodes in energy range ({lo}, {hi})")
    for it in range(1, settings.max_iter + 1):
        mid = 0.5 * (lo + hi)
        if count(mid)[1] > state.n:
            hi = mid
        else:
            lo = mid
        if hi - lo <= settings.tol * max(abs(mid), 1e-300):
            # the lower end never carries the extra tail node of the upper end
            y, _ = count(lo)
            interior = y[1:-1]
            signs = np.signbit(interior[interior != 0.0])
            nodes = int(np.count_nonzero(signs[1:] != signs[:-1]))
            return EigenState(0.5 * (lo + hi), x, y, nodes, it)
    raise ConvergenceError(f"bisection did not reach tol={settings.tol} in {settings.max_iter} steps")


def direct_eigenvalue(
    family: PotentialFamily,
    state: QuantumState,
    g: float,
    settings: SolverSettings | None = None,
) -> float:
    return radial_eigenstate(family, state, g, settings).energy
