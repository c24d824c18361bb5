"""Wave function, normalization and reduced density-matrix kernels.

The state is psi(x, y) = C exp(-lam * y / x) with x in (0, 1] (interior,
radius scaled by R) and y in [1, inf) (exterior). The angular parts are
integrated out, so every volume element is 4*pi*u**2 du.

Everything is returned as a natural log: C**2 overflows past lam ~ 350 and
exp(-2*lam/x) underflows even earlier. ``mode="exact"`` uses the closed forms
obtained by doing the y (or x) integral analytically; ``mode="asymptotic"``
keeps only the leading large-lam term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import specfun
from .errors import DomainError
from .quadrature import integrate_finite, integrate_semiinf

__all__ = [
    "KernelEval",
    "ModelParams",
    "Normalization",
    "closed_form_norm_integral",
    "log_psi",
    "log_radial_prob",
    "layer_points",
    "log_rho",
    "normalization",
    "radial_prob",
    "rho_A",
    "rho_B",
    "trace",
]

Mode = Literal["exact", "asymptotic"]
Region = Literal["A", "B"]

LOG_4PI = math.log(4.0 * math.pi)
LOG_16PI2 = 2.0 * LOG_4PI
LOG_4PI2 = math.log(4.0 * math.pi**2)


def _check_mode(mode: str) -> str:
    if mode == "asym":
        return "asymptotic"
    if mode not in ("exact", "asymptotic"):
        raise DomainError(f"mode must be 'exact' or 'asymptotic', got {mode!r}")
    return mode


@dataclass(frozen=True)
class ModelParams:
    """Coupling ``lam`` and observer location ``x0``.

    Moving the observer from the boundary to x0 rescales the coupling to
    x0 * lam; every computation uses :attr:`lam_eff`.
    """

    lam: float
    x0: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise DomainError(f"lambda must be positive and finite, got {self.lam!r}")
        if not (0 < self.x0 <= 1):
            raise DomainError(f"x0 must lie in (0, 1], got {self.x0!r}")

    @property
    def lam_eff(self) -> float:
        return self.x0 * self.lam


@dataclass(frozen=True)
class Normalization:
    log_c2: float
    mode: str

    @property
    def c2(self) -> float:
        """C**2 itself; overflows to inf for lam beyond ~350."""
        with np.errstate(over="ignore"):
            return float(np.exp(self.log_c2))


@dataclass(frozen=True)
class KernelEval:
    log_value: float | np.ndarray
    region: str
    mode: str

    @property
    def value(self):
        return np.exp(self.log_value)


def _check_interior(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(~((x > 0) & (x <= 1))):
        raise DomainError("interior coordinate must lie in (0, 1]")
    return x


def _check_exterior(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if np.any(~(y >= 1)):
        raise DomainError("exterior coordinate must satisfy y >= 1")
    return y


def _out(a):
    return float(a) if np.ndim(a) == 0 else a


def log_psi(x, y, params: ModelParams, norm: Normalization):
    """log psi(x, y) = log(C) - lam * y / x."""
    x = _check_interior(x)
    y = _check_exterior(y)
    return _out(0.5 * norm.log_c2 - params.lam_eff * (y / x))


def closed_form_norm_integral(lam: float) -> float:
    """log I(lam), I = int_0^1 x^2 dx int_1^inf y^2 exp(-2 lam y / x) dy.

    Substituting t = 1/x after the y integral gives
    I = E5(a)/a + 2 E6(a)/a^2 + 2 E7(a)/a^3 with a = 2 lam.
    """
    if not lam > 0:
        raise DomainError("lambda must be positive")
    a = 2.0 * lam
    scaled = (
        specfun.expn_scaled(5, a) / a
        + 2.0 * specfun.expn_scaled(6, a) / a**2
        + 2.0 * specfun.expn_scaled(7, a) / a**3
    )
    return math.log(scaled) - a


def _quadrature_norm_integral(lam: float, tol: float) -> float:
    """log I(lam) by integrating the analytic y-integral over x numerically."""
    a = 2.0 * lam

    def inner(x):
        b = a / x
        # y integral: exp(-b) (b^2 + 2b + 2) / b^3, scaled by exp(a) to stay finite
        return x**2 * np.exp(a - b) * (b * b + 2 * b + 2) / b**3

    res = integrate_finite(inner, 0.0, 1.0, tol, points=layer_points("A", lam))
    return math.log(res.value) - a


def normalization(
    params: ModelParams,
    mode: str = "exact",
    tol: float = 1e-12,
    method: Literal["closed", "quadrature"] = "closed",
) -> Normalization:
    """Normalization constant log(C**2) for the given coupling.

    Exact mode solves 16 pi^2 C^2 I(lam) = 1; ``method="quadrature"`` swaps
    the E_n closed form for adaptive integration at tolerance ``tol``.
    """
    mode = _check_mode(mode)
    lam = params.lam_eff
    if mode == "asymptotic":
        return Normalization(2.0 * math.log(lam) + 2.0 * lam - LOG_4PI2, mode)
    if method == "closed":
        log_i = closed_form_norm_integral(lam)
    elif method == "quadrature":
        log_i = _quadrature_norm_integral(lam, tol)
    else:
        raise DomainError(f"unknown normalization method {method!r}")
    return Normalization(-LOG_16PI2 - log_i, mode)


def layer_points(region: str, lam: float) -> list[float]:
    """Breakpoints resolving the O(1/lam) boundary layer at u = 1."""
    offsets = [2.0**k / lam for k in range(-2, 9)]
    if region == "A":
        return [1.0 - d for d in offsets if d < 1.0]
    return [1.0 + d for d in offsets]


def _log_rho_a(x, xp, lam, log_c2, mode):
    # b = lam (x + x') / (x x'), written so tiny x cannot overflow the product
    b = lam * (1.0 / x + 1.0 / xp)
    if mode == "exact":
        # log[(b^2 + 2b + 2) e^-b / b^3]
        return LOG_4PI + log_c2 - b - np.log(b) + np.log1p(2.0 / b + 2.0 / (b * b))
    return LOG_4PI + log_c2 - math.log(lam) - np.log(1.0 / x + 1.0 / xp) - b


def _log_rho_b(y, yp, lam, log_c2, mode):
    s = lam * (y + yp)
    if mode == "exact":
        return LOG_4PI + log_c2 + specfun.log_expn(4, s)
    return LOG_4PI + log_c2 - math.log(lam) - s - np.log(y + yp)


def log_rho(region: str, u, up, params: ModelParams, norm: Normalization, mode: str = "exact"):
    """Vectorized log of rho_A(x, x') or rho_B(y, y'); no wrapper object."""
    mode = _check_mode(mode)
    if region == "A":
        u, up = _check_interior(u), _check_interior(up)
        return _out(_log_rho_a(u, up, params.lam_eff, norm.log_c2, mode))
    if region == "B":
        u, up = _check_exterior(u), _check_exterior(up)
        return _out(_log_rho_b(u, up, params.lam_eff, norm.log_c2, mode))
    raise DomainError(f"region must be 'A' or 'B', got {region!r}")


def rho_A(x, xp, params: ModelParams, norm: Normalization, mode: str = "exact") -> KernelEval:
    mode = _check_mode(mode)
    return KernelEval(log_rho("A", x, xp, params, norm, mode), "A", mode)


def rho_B(y, yp, params: ModelParams, norm: Normalization, mode: str = "exact") -> KernelEval:
    mode = _check_mode(mode)
    return KernelEval(log_rho("B", y, yp, params, norm, mode), "B", mode)


def log_radial_prob(region: str, u, params: ModelParams, norm: Normalization, mode: str = "exact"):
    u_arr = np.asarray(u, dtype=float)
    return _out(LOG_4PI + 2.0 * np.log(u_arr) + np.asarray(log_rho(region, u_arr, u_arr, params, norm, mode)))


def radial_prob(region: str, u, params: ModelParams, norm: Normalization, mode: str = "exact"):
    """Radial probability density p(u) = 4 pi u^2 rho(u, u)."""
    return _out(np.exp(log_radial_prob(region, u, params, norm, mode)))


def trace(
    region: str,
    params: ModelParams,
    norm: Normalization,
    mode: str = "exact",
    tol: float = 1e-12,
) -> float:
    """Integral of the radial probability over the region (should be 1)."""

    def p(u):
        return np.exp(log_radial_prob(region, u, params, norm, mode))

    points = layer_points(region, params.lam_eff)
    if region == "A":
        return integrate_finite(p, 0.0, 1.0, tol, points=points).value
    return integrate_semiinf(p, 1.0, tol, points=points).value
