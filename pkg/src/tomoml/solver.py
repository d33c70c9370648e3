"""RrhoR-type fixed-point iterations for maximum-likelihood state estimation.

Three update schemes share one driver, :func:`solve`:

* ``PureRrhoR`` -- ``rho <- R rho R / Tr(R rho R)``. Cheap, but may cycle.
* ``FixedT(t)`` -- the diluted update with ``R`` replaced by
  ``(I + t R) / (1 + t)``, with the same ``t`` at every iteration.
* ``Armijo(...)`` -- the diluted update viewed as a step ``rho + t D(t)``
  along an ascent direction, with ``t`` chosen by backtracking until the
  Armijo sufficient-increase test holds. Globally convergent.

``ExactReference`` maximizes the likelihood along the same curved path by a
grid search plus golden-section refinement; it is a yardstick for the
Armijo rule, not a practical method.

The diluted iterate can be written as
``rho + (2t/q) Dbar + (t^2 tau / q) Dtilde`` with ``tau = Tr(R rho R)``,
``q = 1 + 2t + t^2 tau``, ``Dbar = (R rho + rho R)/2 - rho`` and
``Dtilde = R rho R / tau - rho``; that identity is what makes the line search
well defined.
"""

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    BoundaryLikelihoodError,
    ConditioningError,
    InvalidStateError,
    NumericalError,
)
from .hermitian import HermitianOperator, as_hermitian
from .likelihood import _increase
from .quantum import DensityMatrix, as_density, maximally_mixed

# ---------------------------------------------------------------------------
# step-size rules and configuration


@dataclass(frozen=True)
class PureRrhoR:
    name = "rrhor"


@dataclass(frozen=True)
class FixedT:
    t: float
    name = "fixed"

    def __post_init__(self):
        if not self.t > 0 or not math.isfinite(self.t):
            raise ValueError(f"step size must be positive and finite, got {self.t!r}")


@dataclass(frozen=True)
class Armijo:
    """Backtracking along the diluted path.

    After a rejected trial ``t``, the next trial is ``alpha0 * t`` when
    ``alpha0 == alpha1`` and the midpoint of ``[alpha0 t, alpha1 t]``
    otherwise.
    """

    t_max: float = 1.0
    gamma: float = 1e-4
    alpha0: float = 0.5
    alpha1: float = 0.5
    max_backtracks: int = 60
    name = "armijo"

    def __post_init__(self):
        if not self.t_max > 0 or not math.isfinite(self.t_max):
            raise ValueError(f"t_max must be positive and finite, got {self.t_max!r}")
        if not 0 < self.gamma < 1:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma!r}")
        if not 0 < self.alpha0 <= self.alpha1 < 1:
            raise ValueError("need 0 < alpha0 <= alpha1 < 1")
        if self.max_backtracks < 1:
            raise ValueError("max_backtracks must be at least 1")

    @property
    def shrink(self):
        return 0.5 * (self.alpha0 + self.alpha1)

    @property
    def t_cap(self):
        return max(self.t_max, 1.0)


@dataclass(frozen=True)
class ExactReference:
    t_max: float = 1.0
    grid: int = 64
    refinements: int = 60
    name = "exact"

    def __post_init__(self):
        if not self.t_max > 0 or not math.isfinite(self.t_max):
            raise ValueError(f"t_max must be positive and finite, got {self.t_max!r}")
        if self.grid < 3 or self.refinements < 0:
            raise ValueError("grid must be >= 3 and refinements >= 0")


@dataclass(frozen=True)
class SolverConfig:
    rule: object = field(default_factory=Armijo)
    tol_iterate: float = 1e-7
    tol_stationarity: float = 1e-8
    max_iterations: int = 100_000
    record_iterates: bool = False
    cycle_memory: int = 32
    cycle_tol: float = 1e-10

    def __post_init__(self):
        if not isinstance(self.rule, (PureRrhoR, FixedT, Armijo, ExactReference)):
            raise TypeError(f"unknown step-size rule {self.rule!r}")
        if not (self.tol_iterate > 0 and self.tol_stationarity > 0):
            raise ValueError("tolerances must be positive")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be nonnegative")


# ---------------------------------------------------------------------------
# logs


class Termination(str, Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    CYCLE_DETECTED = "cycle_detected"
    BOUNDARY_ERROR = "boundary_error"


@dataclass(frozen=True)
class IterationRecord:
    k: int
    t: float  # stepsize that produced this iterate (nan for k = 0)
    loglik: float
    residual_extremal: float
    backtracks: int
    iterate_distance: float  # ||rho^k - rho^{k-1}||_F (nan for k = 0)


@dataclass
class IterationLog:
    records: list = field(default_factory=list)
    termination_reason: Termination | None = None
    iterates: list | None = None

    @property
    def iterations(self):
        """Number of update steps taken."""
        return max(len(self.records) - 1, 0)

    @property
    def converged(self):
        return self.termination_reason == Termination.CONVERGED

    @property
    def logliks(self):
        return np.array([r.loglik for r in self.records])

    @property
    def stepsizes(self):
        return np.array([r.t for r in self.records[1:]])

    @property
    def backtracks(self):
        return np.array([r.backtracks for r in self.records[1:]], dtype=int)


@dataclass(frozen=True)
class DirectionPair:
    d_bar: HermitianOperator
    d_tilde: HermitianOperator
    trace_rrr: float


# ---------------------------------------------------------------------------
# array kernels (no validation; shared by the public steps and the driver)


def _rrr(r, rho):
    s = r @ rho @ r
    return 0.5 * (s + s.conj().T)


def _normalized(s):
    return s / np.trace(s).real


def _diluted_kernel(r, rho, t):
    # (I + tR)/(1 + t) written as a convex mix so that huge t stays well scaled
    m = (t / (1.0 + t)) * r
    m[np.diag_indices_from(m)] += 1.0 / (1.0 + t)
    return _normalized(_rrr(m, rho))


def _directions_kernel(r, rho):
    r_rho = r @ rho
    rho_bar = 0.5 * (r_rho + r_rho.conj().T)
    rrr = _rrr(r, rho)
    tau = np.trace(rrr).real
    return rho_bar - rho, rrr / tau - rho, tau


def _combined_kernel(d_bar, d_tilde, tau, t):
    q = 1.0 + 2.0 * t + t * t * tau
    return (2.0 / q) * d_bar + (t * tau / q) * d_tilde


def _gradient_array(ctx, rho):
    p = ctx._checked_probabilities(rho)
    return ctx._gradient_from(p), p


# ---------------------------------------------------------------------------
# public single-step operations


def rrhor_step(ctx, rho):
    rho = as_density(rho)
    r, _ = _gradient_array(ctx, rho.matrix)
    return DensityMatrix._trusted(_normalized(_rrr(r, rho.matrix)))


def diluted_step(ctx, rho, t):
    if not t > 0:
        raise ValueError(f"step size must be positive, got {t!r}")
    rho = as_density(rho)
    r, _ = _gradient_array(ctx, rho.matrix)
    return DensityMatrix._trusted(_diluted_kernel(r, rho.matrix, float(t)))


def compute_directions(ctx, rho):
    rho = as_density(rho)
    r, _ = _gradient_array(ctx, rho.matrix)
    d_bar, d_tilde, tau = _directions_kernel(r, rho.matrix)
    return DirectionPair(
        HermitianOperator._trusted(d_bar), HermitianOperator._trusted(d_tilde), float(tau)
    )


def combined_direction(pair, t):
    """Direction ``D(t)`` with ``rho + t D(t)`` equal to the diluted iterate."""
    if not t > 0:
        raise ValueError(f"step size must be positive, got {t!r}")
    d = _combined_kernel(pair.d_bar.matrix, pair.d_tilde.matrix, pair.trace_rrr, float(t))
    return HermitianOperator._trusted(d)


def armijo_accepts(ctx, rho, pair, t, gamma):
    """Sufficient-increase test ``F(rho + tD) > F(rho) + gamma t Tr(R D)``.

    A trial point at which an observed outcome gets zero probability is
    rejected rather than raising.
    """
    rho = np.asarray(rho)
    r, p = _gradient_array(ctx, rho)
    d = _combined_kernel(pair.d_bar.matrix, pair.d_tilde.matrix, pair.trace_rrr, float(t))
    slope = float(np.vdot(d, r).real)
    inc = _increase(ctx, p, ctx.probabilities(d), float(t))
    return bool(inc > gamma * t * slope)


def path_increase(ctx, rho, pair, t):
    """``F(rho + t D(t)) - F(rho)`` along the diluted path."""
    rho = np.asarray(rho)
    p = ctx._checked_probabilities(rho)
    d = _combined_kernel(pair.d_bar.matrix, pair.d_tilde.matrix, pair.trace_rrr, float(t))
    return _increase(ctx, p, ctx.probabilities(d), float(t))


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def exact_reference_step(ctx, rho, pair, t_max, grid=64, refinements=60, t_min_ratio=1e-6):
    """Approximate ``argmax_{0 < t <= t_max} F(rho + t D(t))``.

    Scans ``grid`` log-spaced points on ``[t_min_ratio * t_max, t_max]``,
    then runs ``refinements`` golden-section rounds (in log t) on the bracket
    around the best grid point.
    """
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    rho = np.asarray(rho)
    r, p = _gradient_array(ctx, rho)
    if np.linalg.norm(r @ rho - rho) <= 1e-10:
        raise ValueError("rho is stationary; the likelihood cannot increase along the path")
    d_bar, d_tilde, tau = pair.d_bar.matrix, pair.d_tilde.matrix, pair.trace_rrr
    pb = ctx.probabilities(d_bar)
    pt = ctx.probabilities(d_tilde)

    def phi(t):
        q = 1.0 + 2.0 * t + t * t * tau
        pd = (2.0 / q) * pb + (t * tau / q) * pt
        return _increase(ctx, p, pd, t)

    ts = np.geomspace(t_min_ratio * t_max, t_max, grid)
    vals = np.array([phi(t) for t in ts])
    i = int(np.argmax(vals))
    lo = math.log(ts[max(i - 1, 0)])
    hi = math.log(ts[min(i + 1, grid - 1)])
    best_t, best_v = float(ts[i]), float(vals[i])

    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = phi(math.exp(x1)), phi(math.exp(x2))
    for _ in range(refinements):
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = phi(math.exp(x1))
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = phi(math.exp(x2))
    for x, v in ((x1, f1), (x2, f2)):
        if v > best_v:
            best_t, best_v = math.exp(x), v
    return min(best_t, float(t_max))


def check_rhobar_subproblem(ctx, rho, max_condition=1e12):
    """Frobenius norm of the first-order residual of the proximal subproblem
    at ``rho_bar = (R rho + rho R)/2``.

    The residual is ``R - ((rho_bar - rho) rho^-1 + rho^-1 (rho_bar - rho))/2 - I``.
    It vanishes whenever ``R`` commutes with ``rho``; in general it equals
    ``R/2 - (rho R rho^-1 + rho^-1 R rho)/4``.
    """
    rho = np.asarray(as_hermitian(rho))
    w, v = np.linalg.eigh(rho)
    if w[0] <= 0 or w[-1] / w[0] > max_condition:
        raise ConditioningError(f"condition number of rho exceeds {max_condition:.0e}")
    rho_inv = (v / w) @ v.conj().T
    r, _ = _gradient_array(ctx, rho)
    r_rho = r @ rho
    step = 0.5 * (r_rho + r_rho.conj().T) - rho
    res = r - 0.5 * (step @ rho_inv + rho_inv @ step) - np.eye(rho.shape[0])
    return float(np.linalg.norm(res))


# ---------------------------------------------------------------------------
# driver


def solve(ctx, rho0=None, config=None):
    """Run one estimation to termination.

    Stops when consecutive iterates are closer than ``tol_iterate``, when
    ``||R rho - rho||_F < tol_stationarity``, after ``max_iterations`` steps,
    or (pure RrhoR only) when an iterate revisits one of the last
    ``cycle_memory`` iterates. Returns ``(rho_hat, log)``.
    """
    config = SolverConfig() if config is None else config
    rule = config.rule
    if rho0 is None:
        rho0 = maximally_mixed(ctx.dim)
    rho0 = as_density(rho0)
    if rho0.dim != ctx.dim:
        raise InvalidStateError(f"start has dim {rho0.dim}, problem has dim {ctx.dim}")
    rho = np.array(rho0.matrix)
    if np.linalg.eigvalsh(rho)[0] <= 0:
        raise InvalidStateError("starting point must be strictly positive definite")

    log = IterationLog(iterates=[] if config.record_iterates else None)
    r, p = _gradient_array(ctx, rho)  # boundary error at the start propagates
    f_val = ctx._value(p)
    residual = float(np.linalg.norm(r @ rho - rho))
    _append(log, IterationRecord(0, math.nan, f_val, residual, 0, math.nan), rho)
    recent = deque(maxlen=config.cycle_memory) if isinstance(rule, PureRrhoR) else None
    t_prev = rule.t_max if isinstance(rule, Armijo) else None

    k = 0
    while True:
        if residual < config.tol_stationarity:
            log.termination_reason = Termination.CONVERGED
            break
        if k >= config.max_iterations:
            log.termination_reason = Termination.MAX_ITERATIONS
            break

        backtracks = 0
        if isinstance(rule, PureRrhoR):
            t = math.inf
            new = _normalized(_rrr(r, rho))
        elif isinstance(rule, FixedT):
            t = rule.t
            new = _diluted_kernel(r, rho, t)
        elif isinstance(rule, Armijo):
            t, backtracks = _armijo_search(ctx, rule, r, rho, p, t_prev, log)
            t_prev = t
            new = _diluted_kernel(r, rho, t)
        else:
            d_bar, d_tilde, tau = _directions_kernel(r, rho)
            pair = DirectionPair(
                HermitianOperator._trusted(d_bar), HermitianOperator._trusted(d_tilde), tau
            )
            t = exact_reference_step(ctx, rho, pair, rule.t_max, rule.grid, rule.refinements)
            new = _diluted_kernel(r, rho, t)

        k += 1
        dist = float(np.linalg.norm(new - rho))
        if recent is not None:
            recent.append(rho)
        rho = new
        try:
            r, p = _gradient_array(ctx, rho)
        except BoundaryLikelihoodError:
            log.termination_reason = Termination.BOUNDARY_ERROR
            _append(log, IterationRecord(k, t, -math.inf, math.nan, backtracks, dist), rho)
            break
        f_val = ctx._value(p)
        if not math.isfinite(f_val) or not np.all(np.isfinite(rho)):
            raise NumericalError(f"non-finite log-likelihood at iteration {k}", log=log)
        residual = float(np.linalg.norm(r @ rho - rho))
        _append(log, IterationRecord(k, t, f_val, residual, backtracks, dist), rho)

        if dist < config.tol_iterate:
            log.termination_reason = Termination.CONVERGED
            break
        if recent is not None and any(
            np.linalg.norm(rho - old) <= config.cycle_tol for old in recent
        ):
            log.termination_reason = Termination.CYCLE_DETECTED
            break

    return DensityMatrix(rho), log


def _append(log, record, rho):
    log.records.append(record)
    if log.iterates is not None:
        log.iterates.append(rho.copy())


def _armijo_search(ctx, rule, r, rho, p, t_prev, log):
    d_bar, d_tilde, tau = _directions_kernel(r, rho)
    pb = ctx.probabilities(d_bar)
    pt = ctx.probabilities(d_tilde)
    slope_bar = float(np.vdot(d_bar, r).real)
    slope_tilde = float(np.vdot(d_tilde, r).real)
    t = min(max(1.0, t_prev), rule.t_cap)
    for backtracks in range(rule.max_backtracks + 1):
        q = 1.0 + 2.0 * t + t * t * tau
        a, b = 2.0 / q, t * tau / q
        slope = a * slope_bar + b * slope_tilde
        inc = _increase(ctx, p, a * pb + b * pt, t)
        if inc > rule.gamma * t * slope:
            return t, backtracks
        t *= rule.shrink
    raise NumericalError(
        f"Armijo test not met after {rule.max_backtracks} backtracks "
        f"(Tr(R rho R) - 1 = {tau - 1.0:.3e})",
        log=log,
    )


def estimate(ctx, rule=None, rho0=None, **config_kwargs):
    """Shorthand for ``solve`` with a rule and keyword configuration."""
    config = SolverConfig(rule=Armijo() if rule is None else rule, **config_kwargs)
    return solve(ctx, rho0, config)


__all__ = [
    "Armijo",
    "DirectionPair",
    "ExactReference",
    "FixedT",
    "IterationLog",
    "IterationRecord",
    "PureRrhoR",
    "SolverConfig",
    "Termination",
    "armijo_accepts",
    "check_rhobar_subproblem",
    "combined_direction",
    "compute_directions",
    "diluted_step",
    "estimate",
    "exact_reference_step",
    "path_increase",
    "rrhor_step",
    "solve",
]
