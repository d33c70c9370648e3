"""Log-likelihood of measurement data and its gradient on Hermitian matrices.

With frequencies ``f_i`` and Born probabilities ``p_i(rho) = Tr(E_i rho)``
the objective is ``F(rho) = sum_i f_i log p_i(rho)`` and its gradient is the
operator ``R(rho) = sum_i (f_i / p_i) E_i``. Outcomes that were never observed
(``f_i = 0``) are dropped from both.

The functions here accept anything array-like for ``rho`` (density matrices,
Hermitian operators, raw arrays) since trial points of a line search are only
Hermitian with unit trace, not necessarily validated states.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryLikelihoodError, DimensionError, InvalidStateError
from .hermitian import POLICY, HermitianOperator
from .quantum import Dataset, Povm


@dataclass(frozen=True, eq=False)
class ObjectiveContext:
    povm: Povm
    data: Dataset
    p_floor: float = 1e-300
    # effects and frequencies restricted to observed outcomes
    _f: np.ndarray = field(init=False, repr=False)
    _e_flat: np.ndarray = field(init=False, repr=False)
    _e_conj_flat: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.povm) != len(self.data):
            raise DimensionError(
                f"POVM has {len(self.povm)} effects but dataset has {len(self.data)} frequencies"
            )
        if not self.p_floor >= 0:
            raise ValueError("p_floor must be nonnegative")
        support = self.data.frequencies > 0
        e = self.povm.stack[support]
        m, d = e.shape[0], self.povm.dim
        object.__setattr__(self, "_f", self.data.frequencies[support])
        object.__setattr__(self, "_e_flat", e.reshape(m, d * d))
        # Tr(E rho) = <conj(E), rho> entrywise, since E is Hermitian
        object.__setattr__(self, "_e_conj_flat", e.conj().reshape(m, d * d))

    @property
    def dim(self):
        return self.povm.dim

    def probabilities(self, rho):
        """Unclamped ``Tr(E_i rho)`` over observed outcomes only."""
        rho = np.asarray(rho)
        if rho.shape != (self.dim, self.dim):
            raise DimensionError(f"expected a {self.dim}x{self.dim} operator, got {rho.shape}")
        return (self._e_conj_flat @ rho.reshape(-1)).real

    def _checked_probabilities(self, rho):
        p = self.probabilities(rho)
        low = p <= self.p_floor
        if np.any(low):
            i = int(np.flatnonzero(low)[0])
            raise BoundaryLikelihoodError(
                f"observed outcome has probability {p[i]:.3e} <= floor {self.p_floor:.0e}"
            )
        return p

    def _value(self, p):
        return float(self._f @ np.log(p))

    def _gradient_from(self, p):
        d = self.dim
        return ((self._f / p) @ self._e_flat).reshape(d, d)


@dataclass(frozen=True)
class StationarityReport:
    residual_extremal: float  # ||R rho - rho||_F
    residual_rrr: float  # ||R rho R - rho||_F
    trace_r_rho: float
    trace_rrr: float


def log_likelihood(ctx, rho):
    return ctx._value(ctx._checked_probabilities(rho))


def gradient(ctx, rho):
    """The operator R(rho); PSD as a nonnegative combination of effects."""
    r = ctx._gradient_from(ctx._checked_probabilities(rho))
    return HermitianOperator._trusted(r)


def stationarity(ctx, rho):
    rho = np.asarray(rho)
    r = ctx._gradient_from(ctx._checked_probabilities(rho))
    r_rho = r @ rho
    rrr = r_rho @ r
    return StationarityReport(
        residual_extremal=float(np.linalg.norm(r_rho - rho)),
        residual_rrr=float(np.linalg.norm(rrr - rho)),
        trace_r_rho=float(np.trace(r_rho).real),
        trace_rrr=float(np.trace(rrr).real),
    )


def directional_derivative(ctx, rho, direction):
    """``Tr(R(rho) D)`` for a traceless Hermitian direction ``D``."""
    dm = np.asarray(direction)
    tr = np.trace(dm)
    if abs(tr) > POLICY.traceless_atol:
        raise InvalidStateError(f"direction has trace {tr:.3e}; it would leave the unit-trace plane")
    r = ctx._gradient_from(ctx._checked_probabilities(rho))
    return float(np.vdot(dm, r).real)


def loglik_increase(ctx, rho, direction, t):
    """``F(rho + t D) - F(rho)`` evaluated without cancellation.

    Probabilities are affine in the state, so the difference is
    ``sum_i f_i log1p(t p_i(D) / p_i(rho))``. Returns ``-inf`` when the trial
    point drives an observed probability to zero or below.
    """
    p = ctx._checked_probabilities(rho)
    pd = ctx.probabilities(direction)
    return _increase(ctx, p, pd, t)


def _increase(ctx, p, pd, t):
    ratio = t * pd / p
    if np.any(ratio <= -1.0) or np.any((ratio + 1.0) * p <= ctx.p_floor):
        return -np.inf
    return float(ctx._f @ np.log1p(ratio))
