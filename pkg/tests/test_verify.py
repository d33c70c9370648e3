import numpy as np
import pytest

from tomoml.verify import (
    FAMILIES,
    check_ascent,
    check_concavity,
    check_rhobar_kkt,
    check_rhobar_norm,
    random_commuting_instance,
    run_verification,
)
from tomoml import gradient


def test_commuting_instances_commute():
    rng = np.random.default_rng(0)
    for _ in range(10):
        ctx, rho = random_commuting_instance(rng, 6)
        r = gradient(ctx, rho).matrix
        assert np.linalg.norm(r @ rho.matrix - rho.matrix @ r) <= 1e-12


@pytest.mark.parametrize("check", [check_rhobar_kkt, check_rhobar_norm])
def test_rhobar_identities_hold_when_commuting(check):
    res = check(np.random.default_rng(1), trials=100, dim_max=8, commuting=True)
    assert res.passed, res.line()


def test_ascent_and_concavity():
    assert check_ascent(np.random.default_rng(2), trials=100).passed
    assert check_concavity(np.random.default_rng(3), trials=100).passed


def test_run_verification_shape():
    results = run_verification(trials=10, seed=0, dim_max=4)
    assert len(results) == len(FAMILIES) + 2
    names = {r.name for r in results}
    assert {"rhobar-kkt-commuting", "rhobar-norm-commuting"} <= names
    assert all(r.line().startswith(r.name) for r in results)
