"""Experiment inputs: the cycling counterexample, Pauli-basis measurements and
datasets drawn from them."""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidStateError
from .quantum import (
    Dataset,
    DensityMatrix,
    Povm,
    born_probabilities,
    from_pure,
    w_state,
)

RNG_ALGORITHM = "numpy.random.PCG64"
MAX_PAULI_QUBITS = 4

_S = 1 / np.sqrt(2)
# eigenbases of X, Y, Z; column 0 is the +1 eigenvector (outcome bit 0)
PAULI_EIGENBASES = {
    "X": np.array([[_S, _S], [_S, -_S]], dtype=np.complex128),
    "Y": np.array([[_S, _S], [1j * _S, -1j * _S]], dtype=np.complex128),
    "Z": np.eye(2, dtype=np.complex128),
}


@dataclass(frozen=True, eq=False)
class ExperimentSpec:
    name: str
    povm: Povm
    dataset: Dataset
    truth: DensityMatrix | None = None
    labels: tuple | None = None

    def __post_init__(self):
        if len(self.povm) != len(self.dataset):
            raise DimensionError("POVM and dataset lengths differ")
        if self.truth is not None and self.truth.dim != self.povm.dim:
            raise DimensionError("truth and POVM dimensions differ")

    @property
    def dim(self):
        return self.povm.dim


def _check_seed(seed):
    if int(seed) != seed or not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def counterexample_spec():
    """One qubit measured in the Z basis: |0> seen once, |1> twice.

    Pure RrhoR started from I/2 cycles forever on this data.
    """
    povm = Povm([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    data = Dataset.from_counts([1, 2])
    return ExperimentSpec("counterexample", povm, data, labels=("0", "1"))


def pauli_labels(n):
    """``(setting, outcome)`` string pairs in the order used by :func:`pauli_povm`."""
    return tuple(
        ("".join(s), "".join(o))
        for s in itertools.product("XYZ", repeat=n)
        for o in itertools.product("01", repeat=n)
    )


def pauli_povm(n):
    """All 3^n local Pauli settings merged into one POVM of 6^n effects.

    Each setting is chosen with probability 3^-n, so the effect for setting
    ``s`` and outcome ``o`` is ``3^-n`` times the projector onto the product
    eigenvector. Effects are ordered setting-major (settings in XYZ
    lexicographic order), outcomes big-endian within a setting.
    """
    if int(n) != n or not 1 <= n <= MAX_PAULI_QUBITS:
        raise ValueError(f"qubit count must be in 1..{MAX_PAULI_QUBITS}, got {n!r}")
    n = int(n)
    weight = 3.0**-n
    effects = []
    for setting in itertools.product("XYZ", repeat=n):
        basis = np.ones((1, 1), dtype=np.complex128)
        for axis in setting:
            basis = np.kron(basis, PAULI_EIGENBASES[axis])
        for col in range(2**n):
            v = basis[:, col]
            effects.append(weight * np.outer(v, v.conj()))
    return Povm(effects)


def noiseless_dataset(rho, povm, zero_atol=1e-14):
    """Frequencies equal to the exact Born probabilities.

    Probabilities below ``zero_atol`` are round-off from outcomes that are
    impossible in ``rho`` and are set to exactly zero.
    """
    p = born_probabilities(rho, povm)
    p[p < zero_atol] = 0.0
    return Dataset(p / p.sum())


def sample_dataset(rho, povm, shots, seed):
    """Multinomial counts from ``shots`` independent measurements.

    Outcomes are drawn by inverse CDF from uniform variates of a PCG64
    generator seeded with ``seed``, so a given seed reproduces the same
    counts on every platform.
    """
    if int(shots) != shots or shots < 1:
        raise InvalidStateError(f"shots must be a positive integer, got {shots!r}")
    rng = np.random.Generator(np.random.PCG64(_check_seed(seed)))
    p = born_probabilities(rho, povm)
    cdf = np.cumsum(p)
    cdf /= cdf[-1]
    u = rng.random(int(shots))
    idx = np.searchsorted(cdf, u, side="right")
    counts = np.bincount(np.minimum(idx, len(p) - 1), minlength=len(p))
    return Dataset.from_counts(counts)


def w_state_spec(n=3, shots=None, seed=0):
    """Pauli tomography of the n-qubit W state, noiseless unless ``shots`` given."""
    psi = w_state(n)
    truth = from_pure(psi)
    povm = pauli_povm(n)
    if shots is None:
        data = noiseless_dataset(truth, povm)
    else:
        data = sample_dataset(truth, povm, shots, seed)
    return ExperimentSpec(f"w-state-{n}", povm, data, truth=truth, labels=pauli_labels(n))
