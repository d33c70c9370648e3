import numpy as np
import pytest

from tomoml import (
    Dataset,
    DensityMatrix,
    DimensionError,
    InvalidStateError,
    Povm,
    PureState,
    born_probabilities,
    fidelity_with_pure,
    from_pure,
    maximally_mixed,
    w_state,
)
from tomoml.instances import random_density, random_povm

Z_POVM = Povm([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])


def test_born_examples():
    assert np.allclose(born_probabilities(maximally_mixed(2), Z_POVM), [0.5, 0.5])
    assert np.allclose(born_probabilities(DensityMatrix(np.diag([1 / 3, 2 / 3])), Z_POVM), [1 / 3, 2 / 3])


def test_born_w_state_zzz():
    rho = from_pure(w_state(3))
    projectors = Povm([np.diag(np.eye(8)[k]) for k in range(8)])
    p = born_probabilities(rho, projectors)
    assert p[0b001] == pytest.approx(1 / 3, abs=1e-15)
    assert p[0b010] == pytest.approx(1 / 3, abs=1e-15)
    assert p[0b100] == pytest.approx(1 / 3, abs=1e-15)


def test_born_dimension_mismatch():
    with pytest.raises(DimensionError):
        born_probabilities(maximally_mixed(3), Z_POVM)


@pytest.mark.parametrize("seed", range(20))
def test_born_sums_to_one(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 9))
    p = born_probabilities(random_density(d, rng), random_povm(d, d * d, rng))
    assert abs(p.sum() - 1) <= 1e-10
    assert np.all((p >= 0) & (p <= 1))


def test_maximally_mixed():
    assert np.allclose(maximally_mixed(2).matrix, np.diag([0.5, 0.5]))
    assert np.array_equal(maximally_mixed(1).matrix, [[1]])
    assert maximally_mixed(4).purity == pytest.approx(1 / 4)
    with pytest.raises(DimensionError):
        maximally_mixed(0)


def test_from_pure():
    assert np.allclose(from_pure([1, 0]).matrix, np.diag([1, 0]))
    assert np.allclose(from_pure(np.array([1, 1]) / np.sqrt(2)).matrix, 0.5)
    rng = np.random.default_rng(5)
    psi = PureState.normalized(rng.normal(size=4) + 1j * rng.normal(size=4))
    rho = from_pure(psi)
    assert rho.purity == pytest.approx(1, abs=1e-12)
    assert fidelity_with_pure(rho, psi) == pytest.approx(1, abs=1e-12)
    with pytest.raises(InvalidStateError):
        PureState.normalized([0, 0])


def test_w_state():
    amp = w_state(3).amplitudes
    expected = np.zeros(8)
    expected[[1, 2, 4]] = 1 / np.sqrt(3)
    assert np.allclose(amp, expected)
    assert np.allclose(w_state(2).amplitudes, [0, 1 / np.sqrt(2), 1 / np.sqrt(2), 0])
    assert np.linalg.norm(w_state(4).amplitudes) == pytest.approx(1)
    with pytest.raises(InvalidStateError):
        w_state(1)


def test_fidelity():
    psi = w_state(2)
    assert fidelity_with_pure(maximally_mixed(4), psi) == pytest.approx(1 / 4)
    assert fidelity_with_pure(DensityMatrix(np.diag([1.0, 0.0])), [0, 1]) == 0
    with pytest.raises(DimensionError):
        fidelity_with_pure(maximally_mixed(2), psi)


class TestConstraints:
    def test_density_rejects_bad_trace(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.diag([0.5, 0.5 + 1e-11]))

    def test_density_rejects_negative(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.diag([1.1, -0.1]))

    def test_density_accepts_tiny_negative(self):
        DensityMatrix(np.diag([1 + 1e-11, -1e-11]))

    def test_povm_rejects_incomplete(self):
        with pytest.raises(InvalidStateError):
            Povm([np.diag([1.0, 0.0]), np.diag([0.0, 1.0 - 1e-9])])

    def test_povm_rejects_non_psd_effect(self):
        with pytest.raises(InvalidStateError):
            Povm([np.diag([1.2, 0.0]), np.diag([-0.2, 1.0])])

    def test_dataset_checks(self):
        with pytest.raises(InvalidStateError):
            Dataset([0.5, 0.6])
        with pytest.raises(InvalidStateError):
            Dataset([1.2, -0.2])
        with pytest.raises(InvalidStateError):
            Dataset([0.5, 0.5], total_count=3)
        d = Dataset.from_counts([1, 2])
        assert d.total_count == 3
        assert np.allclose(d.frequencies, [1 / 3, 2 / 3])
        assert list(d.counts) == [1, 2]
