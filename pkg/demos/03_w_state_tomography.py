"""
Three-qubit W state from Pauli data
===================================

All 27 local Pauli settings are merged into one 216-outcome POVM. With exact
probabilities the estimate recovers the W state, and for large ``t_max`` the
Armijo search accepts the full step every time, so it takes exactly as many
iterations as the fixed-step rule.
"""

# %%
from tomoml import (
    Armijo,
    FixedT,
    ObjectiveContext,
    SolverConfig,
    fidelity_with_pure,
    solve,
    w_state,
    w_state_spec,
)

spec = w_state_spec(3)
ctx = ObjectiveContext(spec.povm, spec.dataset)
psi = w_state(3)

# %%
for t in (10.0, 100.0, 1000.0):
    rho_a, log_a = solve(ctx, config=SolverConfig(rule=Armijo(t_max=t)))
    _, log_f = solve(ctx, config=SolverConfig(rule=FixedT(t)))
    print(
        f"t={t:>6g}  armijo {log_a.iterations:>3} it ({sum(log_a.backtracks)} backtracks)"
        f"  fixed {log_f.iterations:>3} it  fidelity {fidelity_with_pure(rho_a, psi):.7f}"
    )

# %%
# Finite statistics: 10^5 sampled shots with a fixed seed.
noisy = w_state_spec(3, shots=100_000, seed=1)
rho_hat, log = solve(ObjectiveContext(noisy.povm, noisy.dataset))
print("sampled data:", log.iterations, "iterations, fidelity", round(fidelity_with_pure(rho_hat, psi), 4))
