"""Entanglement entropies and the analytic entropy bounds.

Two different quantities are computed and kept apart:

* the *diagonal* entropy, -int p(u) log rho(u, u) du, an integral over the
  kernel diagonal. It is a differential entropy, basis dependent, and may be
  negative. The analytic bounds are stated for this quantity.
* the *spectral* entropy -sum p_k log p_k over the eigenvalues of the
  reduced density operator, obtained by a Nystrom discretization. For a pure
  bipartite state both regions share this spectrum.

Entropies are in nats.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .eigen import symmetric_eigvalsh
from .errors import DomainError, QuadratureError, SpectrumError
from .model import (
    LOG_4PI,
    ModelParams,
    Normalization,
    _check_mode,
    log_radial_prob,
    layer_points,
    log_rho,
    normalization,
    trace,
)
from .quadrature import NodeSet, gauss_legendre, integrate_finite, integrate_semiinf

__all__ = [
    "BoundResult",
    "EntropyReport",
    "EntropyResult",
    "SpectralResult",
    "TruncationWarning",
    "bound",
    "default_y_max",
    "diagonal_entropy",
    "diagonal_entropy_fixed",
    "entropy_report",
    "nystrom_matrix",
    "nystrom_nodes",
    "spectral_entropy",
    "tail_mass",
]

# coefficients of the log and constant terms in the intermediate bound
LOG_COEFF = 1.0 / 8.0
CONST_COEFF = -(1.0 + 4.0 * math.log(2.0)) / 32.0

CLIP_THRESHOLD = 1e-10
TAIL_TOL = 1e-12
REGIME_MIN_LAMBDA = 5.0
SYMMETRY_RTOL = 1e-5
TRACE_TOL = 1e-8

BOUND_VARIANTS = ("intermediate", "subleading", "leading")


class TruncationWarning(UserWarning):
    """The exterior domain cut-off discards more probability than allowed."""


@dataclass(frozen=True)
class EntropyResult:
    value: float
    region: str
    method: str
    mode: str
    quadrature_error: float
    nodes_used: int


@dataclass(frozen=True)
class SpectralResult:
    eigenvalues: np.ndarray  # descending, clipped at zero
    entropy: float
    discarded_negative_mass: float
    raw_sum: float

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class BoundResult:
    variant: str
    value: float
    lam: float


def _diag_integrand(region, params, norm, mode):
    def f(u):
        log_rho_uu = np.asarray(log_rho(region, u, u, params, norm, mode))
        log_p = np.asarray(log_radial_prob(region, u, params, norm, mode))
        p = np.exp(log_p)
        return np.where(p > 0, -p * log_rho_uu, 0.0)

    return f


def diagonal_entropy(
    region: str,
    params: ModelParams,
    norm: Normalization,
    mode: str = "exact",
    tol: float = 1e-10,
) -> EntropyResult:
    """-int 4 pi u^2 rho(u,u) log rho(u,u) du over the region, adaptively."""
    mode = _check_mode(mode)
    f = _diag_integrand(region, params, norm, mode)
    if region not in ("A", "B"):
        raise DomainError(f"region must be 'A' or 'B', got {region!r}")
    points = layer_points(region, params.lam_eff)
    if region == "A":
        res = integrate_finite(f, 0.0, 1.0, tol, points=points)
    else:
        res = integrate_semiinf(f, 1.0, tol, points=points)
    return EntropyResult(res.value, region, "diagonal", mode, res.abs_error_estimate, res.evaluations)


def default_y_max(lam: float) -> float:
    return 1.0 + 40.0 / lam * max(1.0, math.log(lam))


def nystrom_nodes(region: str, params: ModelParams, n_nodes: int, y_max: float | None = None) -> NodeSet:
    if region == "A":
        return gauss_legendre(n_nodes, 0.0, 1.0)
    if region == "B":
        if y_max is None:
            y_max = default_y_max(params.lam_eff)
        return gauss_legendre(n_nodes, 1.0, y_max)
    raise DomainError(f"region must be 'A' or 'B', got {region!r}")


def diagonal_entropy_fixed(
    region: str,
    params: ModelParams,
    norm: Normalization,
    mode: str = "exact",
    n_nodes: int = 200,
    y_max: float | None = None,
) -> float:
    """Diagonal entropy with one fixed Gauss-Legendre rule (no adaptivity).

    An independent route to :func:`diagonal_entropy`; region B is cut at
    ``y_max``.
    """
    mode = _check_mode(mode)
    rule = nystrom_nodes(region, params, n_nodes, y_max)
    return rule.integrate(_diag_integrand(region, params, norm, mode))


def tail_mass(
    params: ModelParams,
    norm: Normalization,
    y_max: float,
    mode: str = "exact",
    tol: float = 1e-3 * TAIL_TOL,
) -> float:
    """Exterior probability beyond ``y_max`` (absolute accuracy ``tol``)."""

    def p(y):
        return np.exp(np.asarray(log_radial_prob("B", y, params, norm, mode)))

    return integrate_semiinf(p, y_max, tol=tol).value


def nystrom_matrix(
    region: str,
    params: ModelParams,
    norm: Normalization,
    n_nodes: int,
    mode: str = "exact",
    y_max: float | None = None,
    tail_tol: float = TAIL_TOL,
) -> np.ndarray:
    """Symmetrized Nystrom matrix sqrt(w_i mu_i) rho(u_i, u_j) sqrt(w_j mu_j).

    mu = 4 pi u^2 is the radial measure. Its eigenvalues approximate the
    Schmidt probabilities of the state.
    """
    if n_nodes < 2:
        raise DomainError("n_nodes must be at least 2")
    mode = _check_mode(mode)
    if region == "B":
        if y_max is None:
            y_max = default_y_max(params.lam_eff)
        tail = tail_mass(params, norm, y_max, mode)
        if tail > tail_tol:
            warnings.warn(
                f"exterior cut-off y_max={y_max:g} drops probability {tail:.3e} > {tail_tol:g}",
                TruncationWarning,
                stacklevel=2,
            )
    rule = nystrom_nodes(region, params, n_nodes, y_max)
    u = rule.nodes
    half_log_measure = 0.5 * (np.log(rule.weights) + LOG_4PI + 2.0 * np.log(u))
    log_k = np.asarray(log_rho(region, u[:, None], u[None, :], params, norm, mode))
    m = np.exp(half_log_measure[:, None] + log_k + half_log_measure[None, :])
    upper = np.triu(m)
    return upper + np.triu(m, 1).T


def spectral_entropy(
    region: str,
    params: ModelParams,
    norm: Normalization,
    n_nodes: int = 200,
    mode: str = "exact",
    y_max: float | None = None,
    solver: str = "lapack",
) -> SpectralResult:
    """Von Neumann entropy of the discretized reduced density operator.

    Eigenvalues in [-1e-10, 0) are set to zero; anything more negative
    raises :class:`SpectrumError`.
    """
    m = nystrom_matrix(region, params, norm, n_nodes, mode, y_max)
    evals = symmetric_eigvalsh(m, solver)[::-1]
    raw_sum = float(math.fsum(evals))
    if evals[-1] < -CLIP_THRESHOLD:
        raise SpectrumError(
            f"eigenvalue {evals[-1]:.3e} below -{CLIP_THRESHOLD:g}; discretization is unreliable"
        )
    negative = evals < 0
    discarded = float(-evals[negative].sum())
    p = np.where(negative, 0.0, evals)
    nz = p[p > 0]
    s = float(-math.fsum(nz * np.log(nz)))
    return SpectralResult(p, max(s, 0.0), discarded, raw_sum)


def bound(variant: str, params: ModelParams, norm: Normalization | None = None) -> BoundResult:
    """Analytic upper bounds on the diagonal entropy.

    ``intermediate`` keeps C**2 explicit; ``subleading`` substitutes the
    large-lambda normalization; ``leading`` is lambda**2 / 3.
    """
    lam = params.lam_eff
    if variant == "leading":
        return BoundResult(variant, lam * lam / 3.0, lam)
    if variant == "subleading":
        corr = LOG_COEFF * math.log(lam / math.pi) + CONST_COEFF
        return BoundResult(variant, lam * lam / 3.0 * (1.0 - 12.0 / lam * corr), lam)
    if variant == "intermediate":
        if norm is None:
            raise DomainError("the intermediate bound needs a normalization")
        log_k = LOG_4PI + norm.log_c2 - math.log(lam)
        prefactor = math.exp(2.0 * LOG_4PI + norm.log_c2 - 2.0 * lam)
        value = prefactor * (1.0 / 3.0 - (LOG_COEFF * log_k + CONST_COEFF) / lam)
        return BoundResult(variant, value, lam)
    raise DomainError(f"unknown bound variant {variant!r}")


@dataclass
class EntropyReport:
    lam: float
    x0: float
    lam_eff: float
    mode: str
    n_nodes: int
    in_regime: bool
    trace_A: float | None = None
    trace_B: float | None = None
    S_diag_A: float | None = None
    S_diag_B: float | None = None
    S_spec_A: float | None = None
    S_spec_B: float | None = None
    spectral_sum_A: float | None = None
    spectral_sum_B: float | None = None
    bounds: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors and all(v is not False for v in self.checks.values())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        d["lambda_eff"] = d.pop("lam_eff")
        d["ok"] = self.ok
        return d


def _attempt(report: EntropyReport, label: str, fn):
    try:
        return fn()
    except (QuadratureError, SpectrumError, ArithmeticError, DomainError) as exc:
        report.errors.append(f"{label}: {exc}")
        return None


def entropy_report(
    params: ModelParams,
    mode: str = "exact",
    n_nodes: int = 200,
    tol: float = 1e-10,
) -> EntropyReport:
    """Every entropy, bound and consistency check for one coupling.

    The spectral entries always use the exact kernels and normalization,
    since only those form a true density operator. Bound comparisons are
    reported as ``"out_of_regime"`` when lambda_eff < REGIME_MIN_LAMBDA.
    """
    mode = _check_mode(mode)
    lam = params.lam_eff
    rep = EntropyReport(
        lam=params.lam, x0=params.x0, lam_eff=lam, mode=mode, n_nodes=n_nodes,
        in_regime=lam >= REGIME_MIN_LAMBDA,
    )
    exact = normalization(params, "exact")
    norm = exact if mode == "exact" else normalization(params, mode)

    rep.trace_A = _attempt(rep, "trace_A", lambda: trace("A", params, norm, mode))
    rep.trace_B = _attempt(rep, "trace_B", lambda: trace("B", params, norm, mode))
    for region in ("A", "B"):
        res = _attempt(rep, f"S_diag_{region}", lambda: diagonal_entropy(region, params, norm, mode, tol))
        setattr(rep, f"S_diag_{region}", None if res is None else res.value)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", TruncationWarning)
            spec = _attempt(rep, f"S_spec_{region}", lambda: spectral_entropy(region, params, exact, n_nodes))
        for w in caught:
            rep.errors.append(f"S_spec_{region}: {w.message}")
        if spec is not None:
            setattr(rep, f"S_spec_{region}", spec.entropy)
            setattr(rep, f"spectral_sum_{region}", spec.raw_sum)

    for variant in BOUND_VARIANTS:
        rep.bounds[variant] = bound(variant, params, norm).value

    if mode == "exact":
        for region in ("A", "B"):
            t = getattr(rep, f"trace_{region}")
            rep.checks[f"trace_{region}"] = t is not None and abs(t - 1.0) <= TRACE_TOL
    for region in ("A", "B"):
        s = getattr(rep, f"S_diag_{region}")
        for variant in BOUND_VARIANTS:
            key = f"S_diag_{region}<={variant}"
            if not rep.in_regime:
                rep.checks[key] = "out_of_regime"
            else:
                rep.checks[key] = s is not None and s <= rep.bounds[variant]
    sa, sb = rep.S_spec_A, rep.S_spec_B
    if sa is not None and sb is not None:
        scale = max(abs(sa), abs(sb), 1e-300)
        rep.checks["spectral_symmetry"] = abs(sa - sb) / scale <= SYMMETRY_RTOL
    else:
        rep.checks["spectral_symmetry"] = False
    return rep
