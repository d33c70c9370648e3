"""Dense Hermitian operators and the handful of linear-algebra kernels the
estimators need.

Operators are immutable: the wrapped array is a private copy flagged
read-only. Products of two Hermitian matrices are generally not Hermitian, so
they are only formed internally; the public operations return the symmetric
combinations (``M A M``, ``(AB + BA)/2``) that are.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotHermitianError, NumericalError


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerances shared by the constructors, the solver and the tests."""

    hermitian_atol: float = 1e-12
    eigen_reconstruction_rtol: float = 1e-10
    trace_atol: float = 1e-12
    psd_atol: float = 1e-10
    povm_sum_atol: float = 1e-10
    frequency_sum_atol: float = 1e-12
    count_integrality_atol: float = 1e-9
    probability_slack: float = 1e-12
    inner_imag_atol: float = 1e-12
    traceless_atol: float = 1e-10


POLICY = NumericPolicy()


def _symmetrize(m):
    h = 0.5 * (m + m.conj().T)
    idx = np.diag_indices(h.shape[0])
    h[idx] = h[idx].real
    return h


class HermitianOperator:
    """A d x d complex Hermitian matrix.

    Input with a Hermitian defect ``max|A - A^H|`` above
    ``POLICY.hermitian_atol`` is rejected; anything within tolerance is
    symmetrized exactly, so stored operators have real diagonals and exact
    conjugate symmetry.
    """

    __slots__ = ("_m",)

    def __init__(self, matrix, *, atol=None):
        m = np.array(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise NumericalError("matrix has non-finite entries")
        atol = POLICY.hermitian_atol if atol is None else atol
        defect = np.max(np.abs(m - m.conj().T))
        if defect > atol:
            raise NotHermitianError(f"Hermitian defect {defect:.3e} exceeds {atol:.1e}")
        self._m = _symmetrize(m)
        self._m.setflags(write=False)

    @classmethod
    def _trusted(cls, m):
        # For results that are Hermitian by construction; skips the defect check.
        obj = cls.__new__(cls)
        obj._m = _symmetrize(np.asarray(m, dtype=np.complex128))
        obj._m.setflags(write=False)
        return obj

    @property
    def matrix(self):
        """Read-only view of the entries."""
        return self._m

    @property
    def dim(self):
        return self._m.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._m
        return self._m.astype(dtype)

    def __repr__(self):
        return f"{type(self).__name__}({np.array2string(self._m, precision=6)})"

    def __eq__(self, other):
        if not isinstance(other, HermitianOperator):
            return NotImplemented
        return self._m.shape == other._m.shape and np.array_equal(self._m, other._m)

    __hash__ = None

    def __add__(self, other):
        return add_scaled(self, other, 1.0, 1.0)

    def __sub__(self, other):
        return add_scaled(self, other, 1.0, -1.0)

    def __mul__(self, scalar):
        scalar = float(scalar)
        return HermitianOperator._trusted(self._m * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __matmul__(self, other):
        # plain matrix product: generally not Hermitian, so returns an ndarray
        return self._m @ np.asarray(other)


def as_hermitian(a):
    """Return ``a`` unchanged if already an operator, otherwise construct one."""
    if isinstance(a, HermitianOperator):
        return a
    return HermitianOperator(a)


def _check_same_dim(*ops):
    dims = {op.dim for op in ops}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")


def identity(d):
    if int(d) != d or d < 1:
        raise DimensionError(f"dimension must be a positive integer, got {d!r}")
    return HermitianOperator._trusted(np.eye(int(d), dtype=np.complex128))


def zeros(d):
    if int(d) != d or d < 1:
        raise DimensionError(f"dimension must be a positive integer, got {d!r}")
    return HermitianOperator._trusted(np.zeros((int(d), int(d)), dtype=np.complex128))


def add_scaled(a, b, alpha, beta):
    """``alpha * a + beta * b`` for real coefficients."""
    a, b = as_hermitian(a), as_hermitian(b)
    _check_same_dim(a, b)
    return HermitianOperator._trusted(float(alpha) * a.matrix + float(beta) * b.matrix)


def sandwich(m, rho):
    """``M rho M``; Hermitian whenever both factors are."""
    m, rho = as_hermitian(m), as_hermitian(rho)
    _check_same_dim(m, rho)
    return HermitianOperator._trusted(m.matrix @ rho.matrix @ m.matrix)


def symmetrized_product(a, b):
    """Jordan product ``(AB + BA) / 2``."""
    a, b = as_hermitian(a), as_hermitian(b)
    _check_same_dim(a, b)
    ab = a.matrix @ b.matrix
    # (AB)^H = BA for Hermitian A, B
    return HermitianOperator._trusted(0.5 * (ab + ab.conj().T))


def trace(a):
    a = as_hermitian(a)
    return float(np.trace(a.matrix).real)


def inner(a, b):
    """Hilbert-Schmidt inner product ``Tr(AB)``, real for Hermitian inputs."""
    a, b = as_hermitian(a), as_hermitian(b)
    _check_same_dim(a, b)
    # Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij)
    return float(np.vdot(b.matrix, a.matrix).real)


def eigen_hermitian(a):
    """Eigenvalues in ascending order and the unitary of eigenvectors.

    Returns ``(w, v)`` with ``a = v @ diag(w) @ v^H``.
    """
    a = as_hermitian(a)
    try:
        w, v = np.linalg.eigh(a.matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    return w, v


def min_eigenvalue(a):
    a = as_hermitian(a)
    try:
        return float(np.linalg.eigvalsh(a.matrix)[0])
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc


def frobenius_distance(a, b):
    a, b = as_hermitian(a), as_hermitian(b)
    _check_same_dim(a, b)
    return float(np.linalg.norm(a.matrix - b.matrix))
