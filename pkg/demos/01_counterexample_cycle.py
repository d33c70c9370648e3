"""
Why plain RrhoR can stall
=========================

One qubit is measured in the Z basis: outcome 0 is seen once and outcome 1
twice. The maximum-likelihood state has diagonal (1/3, 2/3). Starting from
the maximally mixed state, the undamped RrhoR map never reaches it.
"""

# %%
import numpy as np

from tomoml import (
    Armijo,
    FixedT,
    ObjectiveContext,
    PureRrhoR,
    SolverConfig,
    counterexample_spec,
    maximally_mixed,
    rrhor_step,
    solve,
)

spec = counterexample_spec()
ctx = ObjectiveContext(spec.povm, spec.dataset)

# %%
# A few raw RrhoR steps. The diagonal flips between 1/2 and 1/5 forever.
rho = maximally_mixed(2)
for k in range(6):
    print(k, np.round(np.diag(rho.matrix).real, 6))
    rho = rrhor_step(ctx, rho)

# %%
# The solver notices the revisit and stops with ``cycle_detected``.
_, log = solve(ctx, config=SolverConfig(rule=PureRrhoR()))
print("pure RrhoR:", log.termination_reason.value, "after", log.iterations, "iterations")

# %%
# Damping fixes it. A fixed step converges, and the Armijo search converges
# in three steps.
for rule in (FixedT(0.1), FixedT(1.0), Armijo(t_max=1.0)):
    rho_hat, log = solve(ctx, config=SolverConfig(rule=rule))
    diag = np.diag(rho_hat.matrix).real
    print(f"{rule.name:>7}: {log.termination_reason.value:<10} {log.iterations:>4} iterations, diag={diag}")
