"""Random problem instances for property checks and benchmarks."""

import numpy as np

from .hermitian import HermitianOperator
from .likelihood import ObjectiveContext
from .quantum import Dataset, DensityMatrix, Povm, born_probabilities


def _ginibre(d, k, rng):
    return rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))


def random_hermitian(d, rng):
    g = _ginibre(d, d, rng)
    return HermitianOperator._trusted(0.5 * (g + g.conj().T))


def random_traceless(d, rng, unit=True):
    """Random Hermitian direction with zero trace (unit Frobenius norm by default)."""
    h = np.array(random_hermitian(d, rng).matrix)
    h -= np.trace(h).real / d * np.eye(d)
    if unit:
        h /= np.linalg.norm(h)
    return HermitianOperator._trusted(h)


def random_density(d, rng, rank=None):
    """Induced-measure random state; full rank unless ``rank`` is given."""
    g = _ginibre(d, d if rank is None else rank, rng)
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_povm(d, n_effects, rng):
    """``n_effects`` random full-rank effects, rescaled to sum to the identity."""
    raw = []
    for _ in range(n_effects):
        g = _ginibre(d, d, rng)
        raw.append(g @ g.conj().T)
    s = sum(raw)
    w, v = np.linalg.eigh(s)
    s_inv_half = (v / np.sqrt(w)) @ v.conj().T
    effects = [s_inv_half @ a @ s_inv_half for a in raw]
    effects = [0.5 * (e + e.conj().T) for e in effects]
    # push the remaining round-off into the last effect
    effects[-1] = effects[-1] + (np.eye(d) - sum(effects))
    return Povm(effects)


def random_frequencies(n, rng):
    return Dataset(rng.dirichlet(np.ones(n)))


def random_instance(rng, dim_max=8, dim_min=2, stationary=False):
    """A random ``(ctx, rho)`` pair with ``rho`` strictly interior.

    With ``stationary=True`` the data are the exact probabilities of ``rho``
    under an informationally complete POVM, which makes ``rho`` the maximizer.
    """
    d = int(rng.integers(dim_min, dim_max + 1))
    n_effects = d * d + int(rng.integers(0, d + 1))
    povm = random_povm(d, n_effects, rng)
    rho = random_density(d, rng)
    if stationary:
        p = born_probabilities(rho, povm)
        data = Dataset(p / p.sum())
    else:
        data = random_frequencies(n_effects, rng)
    return ObjectiveContext(povm, data), rho
