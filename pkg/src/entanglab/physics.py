"""Physical bound-state parameters and the holographic comparison.

A particle of mass m and binding energy |E| has an asymptotic radial decay
rate kappa = sqrt(2 m |E|) / hbar. Matching that tail at the boundary gives
the dimensionless coupling lam = kappa * R (times x0 for an interior
observer). Only closed-form algebra is done here; kernel-level numerics are
flagged as out of range above ``KERNEL_LAMBDA_CAP``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DomainError

__all__ = [
    "CODATA_2018",
    "CONSTANTS_ENV_VAR",
    "ELECTRON_MASS",
    "ELECTRON_VOLT",
    "ConstantsFileError",
    "PhysicalConstants",
    "PhysicalScenario",
    "build_scenario",
    "holographic_report",
    "load_constants",
    "scenario_from_gamma",
]

CONSTANTS_ENV_VAR = "ENTANGLAB_CONSTANTS"
KERNEL_LAMBDA_CAP = 1e4

ELECTRON_VOLT = 1.602176634e-19  # J, exact
ELECTRON_MASS = 9.1093837015e-31  # kg, CODATA 2018


class ConstantsFileError(ValueError):
    def __init__(self, path, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34  # J s
    G: float = 6.67430e-11  # m^3 kg^-1 s^-2
    c: float = 299792458.0  # m / s

    @property
    def l_P(self) -> float:
        return math.sqrt(self.hbar * self.G / self.c**3)

    @property
    def m_P(self) -> float:
        return math.sqrt(self.hbar * self.c / self.G)


CODATA_2018 = PhysicalConstants()


def load_constants(path: str | os.PathLike | None = None) -> PhysicalConstants:
    """Read ``key = value`` overrides for hbar, G and c.

    Blank lines and ``#`` comments are ignored. Without an explicit path the
    ``ENTANGLAB_CONSTANTS`` environment variable is consulted; with neither,
    the CODATA 2018 defaults are returned.
    """
    if path is None:
        path = os.environ.get(CONSTANTS_ENV_VAR)
        if not path:
            return CODATA_2018
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConstantsFileError(path, lineno, f"expected key=value, got {raw.strip()!r}")
        key, _, val = (part.strip() for part in line.partition("="))
        if key not in ("hbar", "G", "c"):
            raise ConstantsFileError(path, lineno, f"unknown key {key!r} (allowed: hbar, G, c)")
        try:
            num = float(val)
        except ValueError:
            raise ConstantsFileError(path, lineno, f"value for {key} is not a number: {val!r}") from None
        if not (math.isfinite(num) and num > 0):
            raise ConstantsFileError(path, lineno, f"value for {key} must be positive and finite")
        values[key] = num
    return PhysicalConstants(**values)


@dataclass(frozen=True)
class PhysicalScenario:
    m: float
    E_abs: float
    R: float
    x0: float
    constants: PhysicalConstants = field(default=CODATA_2018)

    @property
    def kappa(self) -> float:
        return math.sqrt(2.0 * self.m * self.E_abs) / self.constants.hbar

    @property
    def gamma(self) -> float:
        return self.kappa * self.constants.l_P

    @property
    def lam(self) -> float:
        # gamma * R / l_P collapses to kappa * R
        return self.kappa * self.R * self.x0

    @property
    def eta(self) -> float:
        return self.gamma**2 / (3.0 * math.pi)

    @property
    def eta_physical(self) -> float:
        k = self.constants
        return 2.0 / (3.0 * math.pi) * self.m * self.E_abs / (k.m_P**2 * k.c**2)

    @property
    def area(self) -> float:
        return 4.0 * math.pi * self.R**2

    def as_dict(self) -> dict:
        return {
            "m_kg": self.m,
            "E_abs_J": self.E_abs,
            "R_m": self.R,
            "x0": self.x0,
            "kappa_per_m": self.kappa,
            "gamma": self.gamma,
            "lambda": self.lam,
            "eta": self.eta,
            "eta_physical": self.eta_physical,
            "area_m2": self.area,
            "l_P_m": self.constants.l_P,
            "m_P_kg": self.constants.m_P,
        }


def build_scenario(
    m: float,
    E_abs: float,
    R: float,
    x0: float = 1.0,
    constants: PhysicalConstants = CODATA_2018,
) -> PhysicalScenario:
    for name, v in (("m", m), ("E_abs", E_abs), ("R", R)):
        if not (math.isfinite(v) and v > 0):
            raise DomainError(f"{name} must be positive and finite, got {v!r}")
    if not (0 < x0 <= 1):
        raise DomainError(f"x0 must lie in (0, 1], got {x0!r}")
    return PhysicalScenario(float(m), float(E_abs), float(R), float(x0), constants)


def scenario_from_gamma(
    gamma: float,
    R_over_lp: float,
    x0: float = 1.0,
    constants: PhysicalConstants = CODATA_2018,
) -> PhysicalScenario:
    """Scenario specified in geometric units: gamma and R / l_P.

    The mass is fixed to the Planck mass and |E| chosen so that
    kappa * l_P = gamma.
    """
    if not (gamma > 0 and R_over_lp > 0):
        raise DomainError("gamma and R/l_P must be positive")
    kappa = gamma / constants.l_P
    m = constants.m_P
    E_abs = (kappa * constants.hbar) ** 2 / (2.0 * m)
    return build_scenario(m, E_abs, R_over_lp * constants.l_P, x0, constants)


def holographic_report(scenario: PhysicalScenario) -> dict:
    """Compare the area-law bound eta*A/(4 l_P^2) with the holographic A/(4 l_P^2).

    With an interior observer (x0 < 1) the leading bound lam**2/3 equals
    x0**2 times the area-law bound; ``identity_residual`` measures that.
    """
    l_p = scenario.constants.l_P
    holographic = scenario.area / (4.0 * l_p**2)
    area_law_bound = scenario.eta * holographic
    leading = scenario.lam**2 / 3.0
    residual = abs(leading - scenario.x0**2 * area_law_bound) / leading
    return {
        "S_area_law_bound": area_law_bound,
        "S_holographic": holographic,
        "ratio": scenario.eta,
        "stronger_than_holographic": scenario.eta < 1.0,
        "leading_bound_from_lambda": leading,
        "identity_residual": residual,
        "identity_ok": residual <= 1e-10,
        "eta_identity_residual": abs(scenario.eta - scenario.eta_physical) / scenario.eta,
        "kernel_computable": scenario.lam <= KERNEL_LAMBDA_CAP,
    }
