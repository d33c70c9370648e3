import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tomoml import (
    POLICY,
    DimensionError,
    HermitianOperator,
    NotHermitianError,
    add_scaled,
    eigen_hermitian,
    frobenius_distance,
    identity,
    inner,
    min_eigenvalue,
    sandwich,
    symmetrized_product,
    trace,
)
from tomoml.instances import random_hermitian

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 8)


def diag(*v):
    return HermitianOperator(np.diag(v))


def naive_matmul(a, b):
    n = a.shape[0]
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                out[i, j] += a[i, k] * b[k, j]
    return out


class TestConstruction:
    def test_symmetrizes_within_tolerance(self):
        m = np.array([[1.0, 2 + 1j], [2 - 1j + 5e-13, 3.0 + 1e-14j]])
        op = HermitianOperator(m)
        assert np.array_equal(op.matrix, op.matrix.conj().T)
        assert np.all(np.diag(op.matrix).imag == 0)

    def test_rejects_large_defect(self):
        with pytest.raises(NotHermitianError):
            HermitianOperator([[1.0, 1.0], [0.0, 1.0]])

    def test_rejects_non_square_and_nonfinite(self):
        with pytest.raises(DimensionError):
            HermitianOperator(np.zeros((2, 3)))
        with pytest.raises(Exception):
            HermitianOperator([[np.nan]])

    def test_immutable_and_copied(self):
        m = np.eye(2, dtype=complex)
        op = HermitianOperator(m)
        m[0, 0] = 5
        assert op.matrix[0, 0] == 1
        with pytest.raises(ValueError):
            op.matrix[0, 0] = 2


def test_identity():
    assert np.array_equal(identity(1).matrix, [[1]])
    assert np.array_equal(identity(2).matrix, np.eye(2))
    assert trace(identity(3)) == 3
    with pytest.raises(DimensionError):
        identity(0)


def test_add_scaled():
    i2 = identity(2)
    assert np.array_equal(add_scaled(i2, i2, 1, -1).matrix, np.zeros((2, 2)))
    assert np.array_equal(add_scaled(diag(1, 0), diag(0, 1), 1, 1).matrix, np.eye(2))
    a = random_hermitian(4, np.random.default_rng(0))
    assert np.allclose(add_scaled(a, a, 0.5, 0.5).matrix, a.matrix, atol=1e-15)
    with pytest.raises(DimensionError):
        add_scaled(identity(2), identity(3), 1, 1)


def test_sandwich_examples():
    rho = diag(0.5, 0.5)
    assert np.allclose(sandwich(identity(2), rho).matrix, rho.matrix)
    assert np.allclose(sandwich(diag(2 / 3, 4 / 3), rho).matrix, np.diag([2 / 9, 8 / 9]), atol=1e-15)
    assert np.array_equal(sandwich(diag(3, 1), diag(0, 0)).matrix, np.zeros((2, 2)))
    with pytest.raises(DimensionError):
        sandwich(identity(2), identity(3))


def test_symmetrized_product_examples():
    b = random_hermitian(3, np.random.default_rng(1))
    assert np.allclose(symmetrized_product(identity(3), b).matrix, b.matrix, atol=1e-15)
    got = symmetrized_product(diag(2 / 3, 4 / 3), diag(0.5, 0.5))
    assert np.allclose(got.matrix, np.diag([1 / 3, 2 / 3]), atol=1e-15)
    a, c = np.array([0.3, -1.2, 2.0]), np.array([4.0, 0.5, -0.1])
    assert np.allclose(symmetrized_product(diag(*a), diag(*c)).matrix, np.diag(a * c))


def test_trace_examples():
    assert trace(identity(2)) == 2
    assert trace(diag(2 / 9, 8 / 9)) == pytest.approx(10 / 9, abs=1e-15)
    rng = np.random.default_rng(2)
    a = random_hermitian(2, rng)
    u, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    assert trace(HermitianOperator(u @ a.matrix @ u.conj().T)) == pytest.approx(trace(a), abs=1e-12)


def test_inner_examples():
    rho = diag(0.25, 0.75)
    assert inner(identity(2), rho) == trace(rho)
    assert inner(diag(2 / 3, 4 / 3), diag(-1 / 6, 1 / 6)) == pytest.approx(1 / 9, abs=1e-15)
    a = random_hermitian(5, np.random.default_rng(3))
    assert inner(a, a) >= 0


def test_eigen_examples():
    w, _ = eigen_hermitian(diag(1 / 3, 2 / 3))
    assert np.allclose(w, [1 / 3, 2 / 3])
    w, _ = eigen_hermitian(HermitianOperator([[0, 1], [1, 0]]))
    assert np.allclose(w, [-1, 1])
    assert min_eigenvalue(identity(3)) == pytest.approx(1)
    assert min_eigenvalue(diag(0, 1)) == pytest.approx(0, abs=1e-15)
    assert min_eigenvalue(diag(1 / 3, 2 / 3)) == pytest.approx(1 / 3)


def test_frobenius_examples():
    a = random_hermitian(3, np.random.default_rng(4))
    assert frobenius_distance(a, a) == 0
    assert frobenius_distance(diag(1, 0), diag(0, 1)) == pytest.approx(np.sqrt(2))


@settings(max_examples=50, deadline=None)
@given(seeds, dims)
def test_sandwich_matches_naive_triple_loop(seed, d):
    rng = np.random.default_rng(seed)
    m, rho = random_hermitian(d, rng), random_hermitian(d, rng)
    expected = naive_matmul(naive_matmul(m.matrix, rho.matrix), m.matrix)
    assert np.max(np.abs(sandwich(m, rho).matrix - expected)) <= 1e-12 * max(1, np.abs(expected).max())


@settings(max_examples=50, deadline=None)
@given(seeds, dims)
def test_inner_symmetric(seed, d):
    rng = np.random.default_rng(seed)
    a, b = random_hermitian(d, rng), random_hermitian(d, rng)
    assert abs(inner(a, b) - inner(b, a)) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(seeds, dims)
def test_eigen_reconstruction_and_trace(seed, d):
    a = random_hermitian(d, np.random.default_rng(seed))
    w, v = eigen_hermitian(a)
    assert np.all(np.diff(w) >= 0)
    recon = v @ np.diag(w) @ v.conj().T
    norm = np.linalg.norm(a.matrix)
    assert np.linalg.norm(recon - a.matrix) <= POLICY.eigen_reconstruction_rtol * max(1, norm)
    assert abs(w.sum() - trace(a)) <= 1e-10
    assert np.allclose(v.conj().T @ v, np.eye(d), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(seeds, dims)
def test_triangle_inequality(seed, d):
    rng = np.random.default_rng(seed)
    a, b, c = (random_hermitian(d, rng) for _ in range(3))
    assert frobenius_distance(a, c) <= frobenius_distance(a, b) + frobenius_distance(b, c) + 1e-12


def test_operators_support_arithmetic():
    a, b = diag(1, 2), diag(3, 4)
    assert np.array_equal((a + b).matrix, np.diag([4, 6]))
    assert np.array_equal((b - a).matrix, np.diag([2, 2]))
    assert np.array_equal((2 * a).matrix, np.diag([2, 4]))
    assert np.array_equal(np.asarray(a), a.matrix)
