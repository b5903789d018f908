"""Large-order growth analysis and numerical validation of the series."""

from .asymptotics import AsymptoticFit, FitDiagnostics, fit_gamma_growth, ratio_sequence, richardson
from .numerov import EigenState, SolverSettings, direct_eigenvalue, radial_eigenstate
from .truncation import TruncationResult, optimal_truncation

__all__ = [
    "AsymptoticFit",
    "FitDiagnostics",
    "fit_gamma_growth",
    "ratio_sequence",
    "richardson",
    "EigenState",
    "SolverSettings",
    "direct_eigenvalue",
    "radial_eigenstate",
    "TruncationResult",
    "optimal_truncation",
]
