"""Entanglement entropy of a two-region state psi = C exp(-lam y / x)."""

__version__ = "0.1.0"

from .entropy import (  # noqa: E402
    bound,
    diagonal_entropy,
    entropy_report,
    nystrom_matrix,
    spectral_entropy,
)
from .model import ModelParams, Normalization, normalization, rho_A, rho_B  # noqa: E402
from .physics import build_scenario, holographic_report  # noqa: E402

__all__ = [
    "ModelParams",
    "Normalization",
    "bound",
    "build_scenario",
    "diagonal_entropy",
    "entropy_report",
    "holographic_report",
    "normalization",
    "nystrom_matrix",
    "rho_A",
    "rho_B",
    "spectral_entropy",
]
