"""Invariant batteries behind ``entanglab selftest``."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import specfun
from .entropy import bound, diagonal_entropy, spectral_entropy
from .model import ModelParams, log_rho, normalization, trace
from .quadrature import gauss_legendre, integrate_finite, integrate_semiinf

Check = tuple[str, Callable[[], bool]]


def _recurrence() -> bool:
    worst = 0.0
    for s in (0.1, 1.0, 5.0, 20.0):
        for n in range(1, 7):
            lhs = n * specfun.expn(n + 1, s)
            rhs = math.exp(-s) - s * specfun.expn(n, s)
            worst = max(worst, abs(lhs - rhs) / abs(lhs))
    return worst < 1e-10


def _seam() -> bool:
    lo = specfun.expn(3, specfun.SEAM)
    hi = specfun.expn_scaled(3, np.nextafter(specfun.SEAM, 2.0)) * math.exp(-specfun.SEAM)
    return abs(lo - hi) <= 1e-12 * lo


def _gauss_exactness() -> bool:
    for n in range(1, 21):
        rule = gauss_legendre(n, 0.0, 1.0)
        for k in range(2 * n):
            if abs(rule.integrate(lambda x, k=k: x**k) - 1.0 / (k + 1)) > 1e-13:
                return False
    return True


CLOSED_FORMS = [
    (lambda x: x**2, 0.0, 1.0, 1.0 / 3.0),
    (np.sin, 0.0, 1.0, 1.0 - math.cos(1.0)),
    (np.exp, 0.0, 1.0, math.e - 1.0),
    (lambda x: 1.0 / (1.0 + x * x), 0.0, 1.0, math.pi / 4.0),
    (np.sqrt, 0.0, 1.0, 2.0 / 3.0),
    (lambda x: np.log(x), 0.0, 1.0, -1.0),
    (lambda x: np.exp(-20.0 / x), 0.0, 1.0, specfun.expn(2, 20.0)),
    (lambda x: x**3 * np.exp(-x), 0.0, 10.0, 6.0 - 1366.0 * math.exp(-10.0)),
]
SEMI_INFINITE = [
    (lambda t: np.exp(-t), 0.0, 1.0),
    (lambda y: y**2 * np.exp(-2.0 * y), 1.0, 10.0 / 8.0 * math.exp(-2.0)),
]


def _closed_forms(tol: float = 1e-11) -> bool:
    for f, a, b, exact in CLOSED_FORMS:
        if abs(integrate_finite(f, a, b, tol).value - exact) > max(tol, tol * abs(exact)):
            return False
    for f, a, exact in SEMI_INFINITE:
        if abs(integrate_semiinf(f, a, tol).value - exact) > max(tol, tol * abs(exact)):
            return False
    return True


def _traces(lam: float) -> bool:
    p = ModelParams(lam)
    n = normalization(p)
    return abs(trace("A", p, n) - 1) <= 1e-8 and abs(trace("B", p, n) - 1) <= 1e-8


def _hermiticity(lam: float) -> bool:
    p = ModelParams(lam)
    n = normalization(p)
    u = np.linspace(0.05, 1.0, 20)
    ka = log_rho("A", u[:, None], u[None, :], p, n)
    kb = log_rho("B", 1 + u[:, None], 1 + u[None, :], p, n)
    return bool(np.array_equal(ka, ka.T) and np.array_equal(kb, kb.T))


def _schmidt(lam: float, n_nodes: int) -> bool:
    p = ModelParams(lam)
    n = normalization(p)
    a = spectral_entropy("A", p, n, n_nodes)
    b = spectral_entropy("B", p, n, n_nodes)
    return abs(a.entropy - b.entropy) <= 1e-5 * max(a.entropy, b.entropy)


def _bound_chain() -> bool:
    p = ModelParams(30.0)
    asym = normalization(p, "asymptotic")
    inter = bound("intermediate", p, asym).value
    sub = bound("subleading", p).value
    if abs(inter - sub) > 1e-12 * sub:
        return False
    p20 = ModelParams(20.0)
    s = diagonal_entropy("A", p20, normalization(p20)).value
    return s <= bound("subleading", p20).value <= bound("leading", p20).value * (1 + 1e-12)


def _nystrom_convergence() -> bool:
    p = ModelParams(10.0)
    n = normalization(p)
    s200 = spectral_entropy("A", p, n, 200).entropy
    s400 = spectral_entropy("A", p, n, 400).entropy
    return abs(s200 - s400) < 1e-6


def _diagonal_gap() -> bool:
    gaps = []
    for lam in (10.0, 20.0, 50.0, 100.0):
        p = ModelParams(lam)
        n = normalization(p)
        gaps.append(abs(diagonal_entropy("A", p, n).value - diagonal_entropy("B", p, n).value))
    return all(a > b for a, b in zip(gaps, gaps[1:]))


def checks(level: str = "quick") -> list[Check]:
    battery: list[Check] = [
        ("E_n recurrence", _recurrence),
        ("E_n series/continued-fraction seam", _seam),
        ("Gauss-Legendre exactness n<=20", _gauss_exactness),
        ("adaptive quadrature closed forms", _closed_forms),
        ("trace = 1, lambda=10", lambda: _traces(10.0)),
        ("kernel symmetry, lambda=10", lambda: _hermiticity(10.0)),
        ("Schmidt symmetry, lambda=10, n=100", lambda: _schmidt(10.0, 100)),
        ("bound chain", _bound_chain),
    ]
    if level == "full":
        for lam in (5.0, 10.0, 20.0, 50.0):
            battery.append((f"trace = 1, lambda={lam:g}", lambda lam=lam: _traces(lam)))
            battery.append((f"Schmidt symmetry, lambda={lam:g}, n=200", lambda lam=lam: _schmidt(lam, 200)))
        battery.append(("Nystrom convergence 200 -> 400", _nystrom_convergence))
        battery.append(("diagonal S_A - S_B gap shrinks", _diagonal_gap))
    return battery


def run(level: str = "quick") -> list[tuple[str, bool, str]]:
    results = []
    for name, fn in checks(level):
        try:
            ok = bool(fn())
            detail = ""
        except Exception as exc:  # a crash is a failed check, not an abort
            ok = False
            detail = f"{type(exc).__name__}: {exc}"
        results.append((name, ok, detail))
    return results
