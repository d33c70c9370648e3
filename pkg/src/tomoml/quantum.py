"""Density matrices, POVMs, measurement data and a few standard states.

Basis ordering for multi-qubit systems is big-endian: basis index ``b`` is
read as the binary string of qubit outcomes with qubit 1 as the most
significant bit, so ``|001>`` is index 1 and ``|100>`` is index 4.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidStateError
from .hermitian import (
    POLICY,
    HermitianOperator,
    as_hermitian,
    identity,
)


class DensityMatrix(HermitianOperator):
    """Hermitian, positive semidefinite operator with unit trace."""

    __slots__ = ()

    def __init__(self, matrix, *, atol=None):
        super().__init__(matrix, atol=atol)
        _check_density(self._m)

    @property
    def purity(self):
        return float(np.vdot(self._m, self._m).real)


def _check_density(m):
    tr = np.trace(m).real
    if abs(tr - 1.0) > POLICY.trace_atol:
        raise InvalidStateError(f"trace {tr!r} deviates from 1 by more than {POLICY.trace_atol:.0e}")
    lam = np.linalg.eigvalsh(m)[0]
    if lam < -POLICY.psd_atol:
        raise InvalidStateError(f"minimum eigenvalue {lam:.3e} below -{POLICY.psd_atol:.0e}")


def as_density(rho):
    if isinstance(rho, DensityMatrix):
        return rho
    return DensityMatrix(np.asarray(rho))


class Povm:
    """An ordered measurement: PSD effects summing to the identity.

    The effects are also kept stacked as a read-only ``(m, d, d)`` array
    (``stack``) for vectorized probability evaluation.
    """

    def __init__(self, effects):
        ops = [as_hermitian(e) for e in effects]
        if not ops:
            raise InvalidStateError("a POVM needs at least one effect")
        d = ops[0].dim
        if any(op.dim != d for op in ops):
            raise DimensionError("effects have differing dimensions")
        stack = np.stack([op.matrix for op in ops])
        lam = np.linalg.eigvalsh(stack)[:, 0]
        bad = np.flatnonzero(lam < -POLICY.psd_atol)
        if bad.size:
            i = int(bad[0])
            raise InvalidStateError(f"effect {i} is not PSD (min eigenvalue {lam[i]:.3e})")
        defect = np.max(np.abs(stack.sum(axis=0) - np.eye(d)))
        if defect > POLICY.povm_sum_atol:
            raise InvalidStateError(f"effects sum to identity only within {defect:.3e}")
        stack.setflags(write=False)
        self._effects = tuple(ops)
        self._stack = stack

    @property
    def effects(self):
        return self._effects

    @property
    def stack(self):
        return self._stack

    @property
    def dim(self):
        return self._stack.shape[1]

    def __len__(self):
        return len(self._effects)

    def __iter__(self):
        return iter(self._effects)

    def __getitem__(self, i):
        return self._effects[i]

    def __repr__(self):
        return f"Povm(dim={self.dim}, effects={len(self)})"


@dataclass(frozen=True, eq=False)
class Dataset:
    """Observed relative frequencies, optionally with the total shot count."""

    frequencies: np.ndarray
    total_count: int | None = None

    def __post_init__(self):
        f = np.array(self.frequencies, dtype=float)
        if f.ndim != 1 or f.size == 0:
            raise InvalidStateError("frequencies must be a non-empty vector")
        if not np.all(np.isfinite(f)) or np.any(f < 0):
            raise InvalidStateError("frequencies must be finite and nonnegative")
        if abs(f.sum() - 1.0) > POLICY.frequency_sum_atol:
            raise InvalidStateError(f"frequencies sum to {f.sum()!r}, not 1")
        n = self.total_count
        if n is not None:
            if int(n) != n or n < 1:
                raise InvalidStateError(f"total_count must be a positive integer, got {n!r}")
            n = int(n)
            counts = n * f
            if np.max(np.abs(counts - np.round(counts))) > POLICY.count_integrality_atol:
                raise InvalidStateError("total_count * frequencies is not integral")
        f.setflags(write=False)
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "total_count", n)

    @classmethod
    def from_counts(cls, counts):
        c = np.asarray(counts)
        if c.ndim != 1 or np.any(c < 0) or not np.all(np.mod(c, 1) == 0):
            raise InvalidStateError("counts must be a vector of nonnegative integers")
        n = int(c.sum())
        if n == 0:
            raise InvalidStateError("counts are all zero")
        return cls(c.astype(float) / n, total_count=n)

    @property
    def counts(self):
        if self.total_count is None:
            return None
        return np.round(self.frequencies * self.total_count).astype(np.int64)

    def __len__(self):
        return self.frequencies.size


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(a)
        if norm == 0:
            raise InvalidStateError("zero vector is not a state")
        if abs(norm - 1.0) > 1e-12:
            raise InvalidStateError(f"state norm {norm!r} is not 1")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def normalized(cls, vector):
        v = np.asarray(vector, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise InvalidStateError("zero vector is not a state")
        return cls(v / norm)

    @property
    def dim(self):
        return self.amplitudes.size


def born_probabilities(rho, povm):
    """Outcome probabilities ``Tr(E_i rho)``, clamped to [0, 1]."""
    rho = as_hermitian(rho)
    if rho.dim != povm.dim:
        raise DimensionError(f"state has dim {rho.dim}, POVM has dim {povm.dim}")
    # Tr(E rho) = sum_ij E_ij conj(rho_ij) for Hermitian rho
    p = np.einsum("kij,ij->k", povm.stack, rho.matrix.conj()).real
    return np.clip(p, 0.0, 1.0)


def maximally_mixed(d):
    return DensityMatrix(identity(d).matrix / d)


def from_pure(psi):
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    a = psi.amplitudes
    return DensityMatrix(np.outer(a, a.conj()))


def w_state(n):
    """n-qubit W state: equal superposition of all single-excitation strings."""
    if int(n) != n or n < 2:
        raise InvalidStateError(f"W state needs n >= 2 qubits, got {n!r}")
    n = int(n)
    amp = np.zeros(2**n, dtype=np.complex128)
    for q in range(n):
        amp[1 << q] = 1.0
    return PureState(amp / np.sqrt(n))


def ghz_state(n):
    if int(n) != n or n < 1:
        raise InvalidStateError(f"GHZ state needs n >= 1 qubits, got {n!r}")
    amp = np.zeros(2 ** int(n), dtype=np.complex128)
    amp[0] = amp[-1] = 1.0
    return PureState(amp / np.sqrt(2))


def fidelity_with_pure(rho, psi):
    """Overlap <psi|rho|psi> for a pure reference state."""
    rho = as_hermitian(rho)
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    if rho.dim != psi.dim:
        raise DimensionError(f"state has dim {rho.dim}, reference has dim {psi.dim}")
    a = psi.amplitudes
    return float(np.clip(np.vdot(a, rho.matrix @ a).real, 0.0, 1.0))
