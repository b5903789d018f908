"""Exact large-order perturbation coefficients from hypervirial moment recursions."""

from .engine import (
    EnergySeries,
    MomentTable,
    energy_series,
    inhomogeneous_term,
    initial_table,
    moment_table,
    order0_column,
    orderk_column,
)
from .families import (
    CORNELL,
    QUARTIC,
    PhysicalParams,
    PotentialFamily,
    PotentialKind,
    QuantumState,
    eps0,
    family_from_name,
    physical_to_scaled,
    recursion_coefficients,
)

__version__ = "0.1.0"
