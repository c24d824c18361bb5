"""Generalized exponential integrals E_n(s) = int_1^inf exp(-s t) t^-n dt.

Two regimes are used. For ``s <= SEAM`` the power series (with the
digamma term for the logarithmic piece) is summed; above it the modified
Lentz continued fraction is evaluated directly for ``exp(s) E_n(s)``, so the
scaled value never underflows. All routines accept scalars or numpy arrays
of ``s`` for a fixed integer order ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "ExpnValue",
    "SEAM",
    "expn",
    "expn_scaled",
    "expn_value",
    "log_expn",
]

EULER_GAMMA = 0.57721566490153286061
SEAM = 1.0
_EPS = 1e-16
_TINY = 1e-300
_MAX_SERIES = 200
_MAX_CF = 2000


@dataclass(frozen=True)
class ExpnValue:
    n: int
    s: float
    log_scaled: float  # log(exp(s) * E_n(s))

    @property
    def value(self) -> float:
        return float(np.exp(self.log_scaled - self.s))


def _check_order(n) -> int:
    if int(n) != n or n < 1:
        raise DomainError(f"order n must be an integer >= 1, got {n!r}")
    return int(n)


def _series(n: int, s: np.ndarray) -> np.ndarray:
    """Power series for E_n(s), valid for 0 < s <= SEAM."""
    nm1 = n - 1
    log_s = np.log(s)
    if nm1 == 0:
        total = -log_s - EULER_GAMMA
    else:
        total = np.full_like(s, 1.0 / nm1)
    psi = -EULER_GAMMA + sum(1.0 / k for k in range(1, nm1 + 1))
    fact = np.ones_like(s)
    for i in range(1, _MAX_SERIES + 1):
        fact = fact * (-s / i)
        if i != nm1:
            term = -fact / (i - nm1)
        else:
            term = fact * (psi - log_s)
        total = total + term
        if i > nm1 and np.all(np.abs(term) <= np.abs(total) * _EPS):
            break
    return total


def _continued_fraction(n: int, s: np.ndarray) -> np.ndarray:
    """exp(s) E_n(s) by modified Lentz, valid for s > SEAM."""
    nm1 = n - 1
    b = s + n
    c = np.full_like(s, 1.0 / _TINY)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(s.shape, dtype=bool)
    for i in range(1, _MAX_CF + 1):
        an = -i * (nm1 + i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) >= _EPS
        if not active.any():
            return h
    raise ArithmeticError(f"continued fraction for E_{n} did not converge in {_MAX_CF} terms")


def _as_array(s):
    arr = np.asarray(s, dtype=float)
    return arr, arr.ndim == 0


def _finish(out: np.ndarray, scalar: bool):
    return float(out) if scalar else out


def expn_scaled(n: int, s):
    """Return exp(s) * E_n(s) for s > 0; tends to 1/s as s grows."""
    n = _check_order(n)
    arr, scalar = _as_array(s)
    if np.any(~(arr > 0)):
        raise DomainError("expn_scaled requires s > 0")
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)
    lo = arr <= SEAM
    if lo.any():
        out[lo] = np.exp(arr[lo]) * _series(n, arr[lo])
    if (~lo).any():
        out[~lo] = _continued_fraction(n, arr[~lo])
    return _finish(out.reshape(np.shape(s)), scalar)


def expn(n: int, s):
    """E_n(s) for integer n >= 1 and real s >= 0 (s > 0 when n == 1).

    Accurate to ~1e-14 relative for moderate s; underflows to zero past
    s ~ 700, where :func:`expn_scaled` or :func:`log_expn` should be used.
    """
    n = _check_order(n)
    arr, scalar = _as_array(s)
    if np.any(~(arr >= 0)):
        raise DomainError("expn requires s >= 0")
    if n == 1 and np.any(arr == 0):
        raise DomainError("E_1 diverges at s = 0")
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)
    zero = arr == 0
    lo = (arr <= SEAM) & ~zero
    hi = arr > SEAM
    if zero.any():
        out[zero] = 1.0 / (n - 1)
    if lo.any():
        out[lo] = _series(n, arr[lo])
    if hi.any():
        with np.errstate(under="ignore"):
            out[hi] = np.exp(-arr[hi]) * _continued_fraction(n, arr[hi])
    return _finish(out.reshape(np.shape(s)), scalar)


def log_expn(n: int, s):
    """Natural log of E_n(s), finite for arbitrarily large s."""
    n = _check_order(n)
    arr, scalar = _as_array(s)
    if np.any(arr == 0):
        if n == 1:
            raise DomainError("E_1 diverges at s = 0")
        if np.ndim(arr) == 0:
            return float(-np.log(n - 1))
        out = np.full(arr.shape, -np.log(n - 1))
        pos = arr != 0
        out[pos] = log_expn(n, arr[pos])
        return out
    return _finish(np.log(expn_scaled(n, arr)) - arr, scalar)


def expn_value(n: int, s: float) -> ExpnValue:
    if s == 0:
        # exp(0) E_n(0) = 1/(n-1)
        return ExpnValue(n, 0.0, log_expn(n, 0.0))
    return ExpnValue(n, float(s), float(np.log(expn_scaled(n, s))))
