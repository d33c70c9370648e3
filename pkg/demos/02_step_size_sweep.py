"""
Iteration count against step size
=================================

Sweep t over 1e-3 .. 1e3 on the one-qubit counterexample and compare a fixed
step with the Armijo search capped at ``t_max = t``. Large fixed steps behave
more and more like plain RrhoR and slow down, while the line search keeps
the count bounded.
"""

# %%
import io

from tomoml import ObjectiveContext, counterexample_spec
from tomoml.benchmark import parse_t_values, run_sweep
from tomoml.io import write_sweep

spec = counterexample_spec()
ctx = ObjectiveContext(spec.povm, spec.dataset)
rows = run_sweep(ctx, parse_t_values("logspace:-3:3:13"))

# %%
print(f"{'t':>10} {'fixed':>7} {'armijo':>7}")
by_t = {}
for row in rows:
    by_t.setdefault(row.t, {})[row.rule] = row.iterations
for t, counts in by_t.items():
    print(f"{t:>10.4g} {counts['fixed']:>7} {counts['armijo']:>7}")

# %%
# The same table in the CSV format that ``tomoml sweep`` writes.
buf = io.StringIO()
write_sweep(buf, rows)
print(buf.getvalue().splitlines()[0])
print(buf.getvalue().splitlines()[1])
