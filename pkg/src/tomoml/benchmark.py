"""Iteration counts of the fixed-step and Armijo rules over a range of t.

For each t the fixed rule runs with that step at every iteration, and the
Armijo rule runs with ``t_max = t`` and the defaults gamma = 1e-4,
alpha0 = alpha1 = 0.5. A failing cell is recorded as not converged instead of
aborting the sweep.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import TomographyError
from .solver import Armijo, FixedT, SolverConfig, solve

logger = logging.getLogger(__name__)

RULES = ("armijo", "fixed")


@dataclass(frozen=True)
class SweepRow:
    t: float
    rule: str
    iterations: int
    converged: bool
    final_loglik: float | None
    termination: str = ""


def parse_t_values(spec):
    """``"0.1,1,10"`` or ``"logspace:START:STOP:NUM"`` (base-10 exponents)."""
    spec = spec.strip()
    if spec.startswith("logspace:"):
        parts = spec.split(":")
        if len(parts) != 4:
            raise ValueError("expected logspace:START:STOP:NUM")
        start, stop, num = float(parts[1]), float(parts[2]), int(parts[3])
        values = np.logspace(start, stop, num)
    else:
        values = [float(x) for x in spec.split(",") if x.strip()]
    if not len(values) or any(not v > 0 for v in values):
        raise ValueError("t values must be positive")
    return [float(v) for v in values]


def make_rule(name, t, gamma=1e-4, alpha0=0.5, alpha1=0.5):
    if name == "fixed":
        return FixedT(t)
    if name == "armijo":
        return Armijo(t_max=t, gamma=gamma, alpha0=alpha0, alpha1=alpha1)
    raise ValueError(f"unknown sweep rule {name!r}; choose from {RULES}")


def run_cell(ctx, t, rule_name, rho0=None, **config_kwargs):
    config = SolverConfig(rule=make_rule(rule_name, t), **config_kwargs)
    try:
        _, log = solve(ctx, rho0, config)
    except TomographyError as exc:
        logger.warning("sweep cell t=%g rule=%s failed: %s", t, rule_name, exc)
        log = getattr(exc, "log", None)
        iterations = log.iterations if log is not None else 0
        return SweepRow(t, rule_name, iterations, False, None, type(exc).__name__)
    final = log.records[-1].loglik
    return SweepRow(
        t, rule_name, log.iterations, log.converged, final, log.termination_reason.value
    )


def run_sweep(ctx, t_values, rules=RULES, rho0=None, **config_kwargs):
    """One row per (t, rule) pair, sorted by t then rule name."""
    for r in rules:
        if r not in RULES:
            raise ValueError(f"unknown sweep rule {r!r}; choose from {RULES}")
    rows = [
        run_cell(ctx, float(t), r, rho0, **config_kwargs) for t in t_values for r in rules
    ]
    return sorted(rows, key=lambda row: (row.t, row.rule))
