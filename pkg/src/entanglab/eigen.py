"""Cyclic Jacobi eigenvalues for dense real symmetric matrices.

Used as an independent check on LAPACK's ``eigvalsh``; it is slower but
has no dependency beyond elementwise numpy.
"""

from __future__ import annotations

import numpy as np

__all__ = ["jacobi_eigvalsh", "symmetric_eigvalsh"]

MAX_SWEEPS = 50


def jacobi_eigvalsh(a: np.ndarray, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of symmetric ``a`` in ascending order.

    A pair (p, q) is rotated only while |a_pq| > n*eps*sqrt(|a_pp a_qq|);
    iteration stops after the first sweep that rotates nothing. For
    positive semidefinite input this threshold keeps small eigenvalues
    accurate relative to their own size.
    """
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    if a.ndim != 2 or a.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix must be exactly symmetric")
    scale = np.abs(a).max() if n else 0.0
    if n <= 1 or scale == 0.0:
        return np.sort(a.diagonal())
    thresh = n * np.finfo(float).eps
    floor = 1e-300 + np.finfo(float).eps ** 2 * scale

    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                app, aqq = a[p, p], a[q, q]
                if abs(apq) <= max(thresh * np.sqrt(abs(app * aqq)), floor):
                    continue
                rotated = True
                theta = (aqq - app) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
        if not rotated:
            return np.sort(a.diagonal())
    raise ArithmeticError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def symmetric_eigvalsh(a: np.ndarray, solver: str = "lapack") -> np.ndarray:
    if solver == "lapack":
        return np.linalg.eigvalsh(a)
    if solver == "jacobi":
        return jacobi_eigvalsh(a)
    raise ValueError(f"unknown eigensolver {solver!r}")
