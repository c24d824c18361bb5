"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain of the requested function."""


class QuadratureError(RuntimeError):
    """Adaptive integration exhausted its evaluation budget.

    The best available estimate and its error bound are kept on the
    exception so callers can decide whether a partial answer is usable.
    """

    def __init__(self, message: str, value: float, abs_error: float, evaluations: int):
        super().__init__(message)
        self.value = value
        self.abs_error = abs_error
        self.evaluations = evaluations


class SpectrumError(RuntimeError):
    """A discretized density matrix produced an unphysical spectrum."""
